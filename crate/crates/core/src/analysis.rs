//! Local stability of the coexistence equilibrium under both maps.
//!
//! Jacobians at `E* = (N*, P*)` are evaluated from closed forms; eigenvalues
//! come from the characteristic polynomial `λ² - tr·λ + det`. The
//! classification is decided by eigenvalue moduli, and the three Jury sign
//! conditions (`1 - det > 0`, `1 - tr + det > 0`, `1 + tr + det > 0`) are
//! reported next to it.
//!
//! The lemma these conditions are usually quoted from sometimes lists
//! `0 < a11 < 1, 0 < a22 < 1` as the third condition. That is not
//! equivalent to the unit-circle test and is not used here.
//!
//! For the Euler map the classical sufficient bound is
//! `h < min{G/H, 2(1+αδ)²/G}` with `G = (1+αδ)²(1+βδ) - δ(2+αδ)` and
//! `H = βδ(1+αδ-δ)(1+αδ)`. Only the first branch is sharp when the
//! eigenvalues are complex: at α = 0.7, β = 0.9, δ = 0.6 the map is still
//! stable at `h = 2.44` and loses stability at `G/H ≈ 2.6293`.
//! [`euler_critical_step`] locates the true crossing.

use std::fmt;

use num_complex::Complex64;
use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::models::{require_interior, ModelParams, ScalarModelParams};
use crate::oracle::quadratic_eigen;
use crate::schemes::{orbit, DiscreteMap, Phase};

/// Width of the band around unit modulus treated as non-hyperbolic.
pub const NON_HYPERBOLIC_BAND: f64 = 1e-9;

/// Existence and stability of the coexistence equilibrium of the ODE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ContinuousStability {
    pub exists: bool,
    pub stable: bool,
}

/// `exists ⟺ 1 + αδ > δ`, `stable ⟺ exists ∧ δ(2 + αδ) < (1 + αδ)²(1 + βδ)`.
pub fn continuous_stability(params: &ModelParams) -> ContinuousStability {
    let ModelParams { alpha, beta, delta } = *params;
    let q = 1.0 + alpha * delta;
    let exists = q > delta;
    let stable = exists && delta * (2.0 + alpha * delta) < q * q * (1.0 + beta * delta);
    ContinuousStability { exists, stable }
}

/// A 2×2 variational matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobian2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Jacobian2 {
    pub const IDENTITY: Jacobian2 = Jacobian2 {
        a11: 1.0,
        a12: 0.0,
        a21: 0.0,
        a22: 1.0,
    };

    pub fn diag(a: f64, b: f64) -> Self {
        Jacobian2 {
            a11: a,
            a12: 0.0,
            a21: 0.0,
            a22: b,
        }
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn is_finite(&self) -> bool {
        [self.a11, self.a12, self.a21, self.a22]
            .iter()
            .all(|v| v.is_finite())
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }
}

impl Serialize for Jacobian2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.a11, self.a12], [self.a21, self.a22]].serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JuryReport {
    pub det: f64,
    pub trace: f64,
    /// `1 - det > 0`
    pub cond_det: bool,
    /// `1 - tr + det > 0`
    pub cond_flip: bool,
    /// `1 + tr + det > 0`
    pub cond_fold: bool,
}

impl JuryReport {
    pub fn all(&self) -> bool {
        self.cond_det && self.cond_flip && self.cond_fold
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Classification {
    Stable,
    Source,
    Saddle,
    NonHyperbolic,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub jacobian: Jacobian2,
    pub eigenvalues: [Complex64; 2],
    pub moduli: [f64; 2],
    pub jury: JuryReport,
    pub classification: Classification,
}

struct ComplexRepr<'a>(&'a [Complex64; 2]);

impl Serialize for ComplexRepr<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for z in self.0 {
            #[derive(Serialize)]
            struct Z {
                re: f64,
                im: f64,
            }
            seq.serialize_element(&Z { re: z.re, im: z.im })?;
        }
        seq.end()
    }
}

impl Serialize for StabilityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StabilityReport", 5)?;
        st.serialize_field("jacobian", &self.jacobian)?;
        st.serialize_field("eigenvalues", &ComplexRepr(&self.eigenvalues))?;
        st.serialize_field("moduli", &self.moduli)?;
        st.serialize_field("jury", &self.jury)?;
        st.serialize_field("classification", &self.classification)?;
        st.end()
    }
}

impl StabilityReport {
    pub fn max_modulus(&self) -> f64 {
        self.moduli[0].max(self.moduli[1])
    }
}

/// Eigenvalues, moduli, Jury conditions and the modulus-based class of `j`.
pub fn classify(j: &Jacobian2) -> StabilityReport {
    let (trace, det) = (j.trace(), j.det());
    let eigenvalues = quadratic_eigen(trace, det);
    let moduli = [eigenvalues[0].norm(), eigenvalues[1].norm()];
    let on_circle = |m: f64| (m - 1.0).abs() < NON_HYPERBOLIC_BAND;
    let classification = if moduli.iter().any(|&m| on_circle(m)) {
        Classification::NonHyperbolic
    } else {
        match (moduli[0] < 1.0, moduli[1] < 1.0) {
            (true, true) => Classification::Stable,
            (false, false) => Classification::Source,
            _ => Classification::Saddle,
        }
    };
    StabilityReport {
        jacobian: *j,
        eigenvalues,
        moduli,
        jury: JuryReport {
            det,
            trace,
            cond_det: 1.0 - det > 0.0,
            cond_flip: 1.0 - trace + det > 0.0,
            cond_fold: 1.0 + trace + det > 0.0,
        },
        classification,
    }
}

/// The NSFD-specific denominators at `E*`:
/// `G_n = {1 + h + h(N* + αP*)}(N* + αP*)` and `H_n = (1 + βδh)N*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NsfdFactors {
    pub g_n: f64,
    pub h_n: f64,
}

pub fn nsfd_interior_factors(params: &ModelParams, h: f64) -> Result<NsfdFactors> {
    let e = require_interior(params)?;
    let b = e.n + params.alpha * e.p;
    Ok(NsfdFactors {
        g_n: (1.0 + h + h * b) * b,
        h_n: (1.0 + params.beta * params.delta * h) * e.n,
    })
}

/// Jacobian of the NSFD map at `E*`, written with `P* = δN*`.
pub fn nsfd_jacobian_at_interior(params: &ModelParams, h: f64) -> Result<Jacobian2> {
    let ModelParams { alpha, beta, delta } = *params;
    let n = require_interior(params)?.n;
    let NsfdFactors { g_n, h_n } = nsfd_interior_factors(params, h)?;
    Ok(Jacobian2 {
        a11: 1.0 + n * h * (1.0 - 2.0 * n - alpha * delta * n) / g_n,
        a12: n * h * (alpha - alpha * n - 1.0) / g_n,
        a21: beta * delta * delta * h * n / h_n,
        a22: 1.0 - beta * delta * h * n / h_n,
    })
}

/// Jacobian of the Euler map at `E*`.
pub fn euler_jacobian_at_interior(params: &ModelParams, h: f64) -> Result<Jacobian2> {
    let ModelParams { alpha, beta, .. } = *params;
    let e = require_interior(params)?;
    let (n, p) = (e.n, e.p);
    let b = n + alpha * p;
    Ok(Jacobian2 {
        a11: 1.0 - h * n * (1.0 - p / (b * b)),
        a12: -h * (n / b) * (n / b),
        a21: h * beta * (p / n) * (p / n),
        a22: 1.0 - h * beta * p / n,
    })
}

/// Sufficient step-size bound for the Euler map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EulerThreshold {
    /// `G = (1+αδ)²(1+βδ) - δ(2+αδ)`
    pub g_euler: f64,
    /// `H = βδ(1+αδ-δ)(1+αδ)`
    pub h_euler: f64,
    /// `G/H`
    pub det_bound: f64,
    /// `2(1+αδ)²/G`
    pub flip_bound: f64,
    /// `min{G/H, 2(1+αδ)²/G}`
    pub h_max: f64,
}

pub fn euler_threshold(params: &ModelParams) -> Result<EulerThreshold> {
    let cs = continuous_stability(params);
    if !cs.exists {
        return Err(Error::Condition(format!(
            "1 + alpha*delta = {} must exceed delta = {}",
            params.one_plus_alpha_delta(),
            params.delta
        )));
    }
    if !cs.stable {
        return Err(Error::Condition(
            "delta(2 + alpha*delta) < (1 + alpha*delta)^2 (1 + beta*delta) fails".into(),
        ));
    }
    let ModelParams { beta, delta, .. } = *params;
    let q = params.one_plus_alpha_delta();
    let g = q * q * (1.0 + beta * delta) - delta * (1.0 + q);
    let hh = beta * delta * (q - delta) * q;
    let det_bound = g / hh;
    let flip_bound = 2.0 * q * q / g;
    Ok(EulerThreshold {
        g_euler: g,
        h_euler: hh,
        det_bound,
        flip_bound,
        h_max: det_bound.min(flip_bound),
    })
}

/// Smallest step size at which the Euler Jacobian at `E*` stops being
/// Stable, found by bisection on `max|λ| = 1` over `[1e-6, 1e3]`
/// (80 halvings). `None` if the map is still stable at `1e3`.
///
/// Since the Euler Jacobian is `I + hA`, its stable set in `h` is an
/// interval starting at 0, so the crossing is unique.
pub fn euler_critical_step(params: &ModelParams) -> Result<Option<f64>> {
    let stable = |h: f64| -> Result<bool> {
        Ok(classify(&euler_jacobian_at_interior(params, h)?).max_modulus() < 1.0)
    };
    let (mut lo, mut hi) = (1e-6, 1e3);
    if stable(hi)? {
        return Ok(None);
    }
    if !stable(lo)? {
        return Ok(Some(lo));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// `2/r`: the Euler logistic map is stable at `x = K` below this step.
pub fn logistic_euler_threshold(sp: &ScalarModelParams) -> f64 {
    2.0 / sp.r
}

/// Long-run behaviour of an orbit, as judged from a window of iterates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    ConvergedToInterior,
    Oscillatory,
    /// Non-finite value or exit from the model domain at `step`.
    Diverged {
        step: usize,
    },
    ConvergedElsewhere,
}

impl Outcome {
    pub fn is_converged_to_interior(&self) -> bool {
        matches!(self, Outcome::ConvergedToInterior)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::ConvergedToInterior => f.write_str("ConvergedToInterior"),
            Outcome::Oscillatory => f.write_str("Oscillatory"),
            Outcome::Diverged { step } => write!(f, "Diverged@{step}"),
            Outcome::ConvergedElsewhere => f.write_str("ConvergedElsewhere"),
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Outcome plus the sampled window it was judged on.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<P> {
    pub outcome: Outcome,
    /// Empty when the orbit diverged.
    pub window: Vec<P>,
}

/// Runs `transient` steps from `x0`, collects the next `window` iterates and
/// labels them: all within `tol` of the map's target fixed point ⇒
/// converged to interior; failure ⇒ diverged; peak-to-peak amplitude of
/// some component above `tol` ⇒ oscillatory; otherwise converged elsewhere.
pub fn observe<M: DiscreteMap>(
    map: &M,
    x0: M::Point,
    transient: usize,
    window: usize,
    tol: f64,
) -> Observation<M::Point> {
    let mut samples = Vec::with_capacity(window);
    for (i, item) in orbit(map, x0).take(transient + 1 + window).enumerate() {
        match item {
            Ok(x) if i > transient => samples.push(x),
            Ok(_) => {}
            Err(f) => {
                return Observation {
                    outcome: Outcome::Diverged { step: f.index },
                    window: Vec::new(),
                }
            }
        }
    }
    Observation {
        outcome: label_window(&samples, map.target(), tol),
        window: samples,
    }
}

/// Labels a window of finite samples against an optional target point.
/// An empty window is never "converged".
pub fn label_window<P: Phase>(samples: &[P], target: Option<P>, tol: f64) -> Outcome {
    let converged =
        !samples.is_empty() && target.is_some_and(|t| samples.iter().all(|x| x.distance(&t) < tol));
    if converged {
        Outcome::ConvergedToInterior
    } else if peak_to_peak(samples) > tol {
        Outcome::Oscillatory
    } else {
        Outcome::ConvergedElsewhere
    }
}

/// Largest per-component `max - min` over `xs`.
pub fn peak_to_peak<P: Phase>(xs: &[P]) -> f64 {
    (0..P::COMPONENTS.len())
        .map(|i| {
            let (lo, hi) = xs
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                    let v = x.component(i);
                    (lo.min(v), hi.max(v))
                });
            if xs.is_empty() {
                0.0
            } else {
                hi - lo
            }
        })
        .fold(0.0, f64::max)
}

/// Classifies the long-run behaviour of the orbit of `x0`.
pub fn simulation_stability_oracle<M: DiscreteMap>(
    map: &M,
    x0: M::Point,
    transient: usize,
    window: usize,
    tol: f64,
) -> Outcome {
    observe(map, x0, transient, window.max(1), tol).outcome
}
