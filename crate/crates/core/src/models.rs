//! The continuous-time systems: the ratio-dependent Holling–Tanner
//! predator–prey model and two scalar validation models (logistic growth
//! and linear decay).
//!
//! The predator–prey system is
//!
//! ```text
//! dN/dt = N(1 - N) - NP/(N + αP)
//! dP/dt = βP(δ - P/N)
//! ```
//!
//! with positive constants α (interference), β (predator intrinsic rate)
//! and δ (carrying ratio).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters (α, β, δ) of the predator–prey model.
///
/// Fields are public so that boundary probes (e.g. α = 0) can be built
/// directly; [`ModelParams::new`] enforces the positivity invariant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

impl ModelParams {
    /// The reference parameter set α = 0.7, β = 0.9, δ = 0.6.
    pub const REFERENCE: ModelParams = ModelParams {
        alpha: 0.7,
        beta: 0.9,
        delta: 0.6,
    };

    pub fn new(alpha: f64, beta: f64, delta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("delta", delta)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(ModelParams { alpha, beta, delta })
    }

    /// `1 + αδ`, the quantity that appears throughout the equilibrium and
    /// threshold formulas.
    pub fn one_plus_alpha_delta(&self) -> f64 {
        1.0 + self.alpha * self.delta
    }
}

/// A (prey, predator) pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    pub n: f64,
    pub p: f64,
}

impl State {
    pub const fn new(n: f64, p: f64) -> Self {
        State { n, p }
    }

    pub fn is_finite(&self) -> bool {
        self.n.is_finite() && self.p.is_finite()
    }

    pub fn distance(&self, other: &State) -> f64 {
        (self.n - other.n).hypot(self.p - other.p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquilibriumKind {
    PredatorFree,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Equilibrium {
    pub state: State,
    pub kind: EquilibriumKind,
}

/// Parameters of the scalar validation models: logistic growth rate `r`,
/// carrying capacity `k`, and decay rate `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarModelParams {
    pub r: f64,
    pub k: f64,
    pub lambda: f64,
}

impl ScalarModelParams {
    pub fn new(r: f64, k: f64, lambda: f64) -> Result<Self> {
        for (name, v) in [("r", r), ("k", k), ("lambda", lambda)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(ScalarModelParams { r, k, lambda })
    }
}

impl Default for ScalarModelParams {
    /// r = 3, K = 50, λ = 1.
    fn default() -> Self {
        ScalarModelParams {
            r: 3.0,
            k: 50.0,
            lambda: 1.0,
        }
    }
}

/// Right-hand side of the predator–prey system at `s`.
///
/// `P = 0` is admissible; `N <= 0` (or `N + αP = 0`) is rejected because
/// both `P/N` and `NP/(N + αP)` are undefined there.
pub fn rhs_predprey(params: &ModelParams, s: State) -> Result<State> {
    if !(s.n > 0.0) {
        return Err(Error::Domain(format!(
            "prey density must be positive, got N = {}",
            s.n
        )));
    }
    let b = s.n + params.alpha * s.p;
    if b == 0.0 {
        return Err(Error::Domain("N + alpha*P vanishes".into()));
    }
    Ok(State {
        n: s.n * (1.0 - s.n) - s.n * s.p / b,
        p: params.beta * s.p * (params.delta - s.p / s.n),
    })
}

pub fn predator_free_equilibrium() -> Equilibrium {
    Equilibrium {
        state: State::new(1.0, 0.0),
        kind: EquilibriumKind::PredatorFree,
    }
}

/// Closed-form coexistence equilibrium `N* = (1 + αδ - δ)/(1 + αδ)`,
/// `P* = δN*`, present only when `1 + αδ > δ`. β does not enter.
pub fn interior_equilibrium(params: &ModelParams) -> Option<Equilibrium> {
    let q = params.one_plus_alpha_delta();
    if !(q > params.delta) {
        return None;
    }
    let n = (q - params.delta) / q;
    if !(n > 0.0) {
        return None;
    }
    Some(Equilibrium {
        state: State::new(n, params.delta * n),
        kind: EquilibriumKind::Interior,
    })
}

/// Like [`interior_equilibrium`] but reports absence as an error.
pub fn require_interior(params: &ModelParams) -> Result<State> {
    interior_equilibrium(params)
        .map(|e| e.state)
        .ok_or(Error::Existence {
            lhs: params.one_plus_alpha_delta(),
            delta: params.delta,
        })
}

/// `rx(1 - x/K)`
pub fn rhs_logistic(sp: &ScalarModelParams, x: f64) -> f64 {
    sp.r * x * (1.0 - x / sp.k)
}

/// `-λx`
pub fn rhs_decay(sp: &ScalarModelParams, x: f64) -> f64 {
    -sp.lambda * x
}
