//! Dynamic consistency of discretizations of a ratio-dependent
//! Holling–Tanner predator–prey model.
//!
//! The crate compares a nonstandard finite-difference (NSFD) map with the
//! forward Euler map of
//!
//! ```text
//! dN/dt = N(1 - N) - NP/(N + αP),    dP/dt = βP(δ - P/N)
//! ```
//!
//! and checks which qualitative properties of the ODE each map keeps:
//! equilibria, positivity, local stability, and the absence of step-size
//! dependent bifurcations.
//!
//! * [`models`]: the continuous systems and their equilibria.
//! * [`schemes`]: one-step maps, iteration, and a Dormand–Prince reference
//!   integrator.
//! * [`analysis`]: Jacobians at the coexistence point, eigenvalues, Jury
//!   conditions, step-size thresholds and an orbit-based stability oracle.
//! * [`bifurcation`]: step-size sweeps.
//! * [`oracle`]: finite-difference and residual checks used for verification.
//! * [`cli`]: the `dyncons` command-line front end.
//!
//! ```
//! use dyncons::analysis::{classify, nsfd_jacobian_at_interior, Classification};
//! use dyncons::models::ModelParams;
//!
//! let j = nsfd_jacobian_at_interior(&ModelParams::REFERENCE, 100.0).unwrap();
//! assert_eq!(classify(&j).classification, Classification::Stable);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bifurcation;
pub mod cli;
pub mod error;
pub mod models;
pub mod oracle;
pub mod schemes;

pub use error::{Error, Result};
pub use models::{ModelParams, ScalarModelParams, State};
