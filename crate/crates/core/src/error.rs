use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A state or parameter outside the region where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value at step {index}")]
    NonFinite { index: usize },

    /// The adaptive integrator could not make progress.
    #[error("step size {step:e} fell below {min_step:e} at t = {t}")]
    StepFailure { t: f64, step: f64, min_step: f64 },

    #[error(
        "interior equilibrium does not exist: requires 1 + alpha*delta > delta, \
         got 1 + alpha*delta = {lhs}, delta = {delta}"
    )]
    Existence { lhs: f64, delta: f64 },

    /// Continuous-time existence/stability conditions fail.
    #[error("continuous stability conditions fail: {0}")]
    Condition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
