//! Independent verification helpers: central-difference Jacobians, the
//! implicit (pre-simplification) form of the NSFD scheme, and a stable
//! quadratic root solver for 2×2 characteristic polynomials.

use num_complex::Complex64;

use crate::analysis::Jacobian2;
use crate::error::{Error, Result};
use crate::models::{ModelParams, State};

pub const DEFAULT_FD_EPS: f64 = 1e-6;

/// Central-difference Jacobian of a planar one-step map at `s`.
pub fn fd_jacobian<F>(map_step: F, s: State, eps: f64) -> Result<Jacobian2>
where
    F: Fn(State) -> Result<State>,
{
    if !(1e-8..=1e-4).contains(&eps) {
        return Err(Error::invalid(format!(
            "eps must lie in [1e-8, 1e-4], got {eps}"
        )));
    }
    let (n_hi, n_lo) = (s.n + eps, s.n - eps);
    let (p_hi, p_lo) = (s.p + eps, s.p - eps);
    let dn_plus = map_step(State::new(n_hi, s.p))?;
    let dn_minus = map_step(State::new(n_lo, s.p))?;
    let dp_plus = map_step(State::new(s.n, p_hi))?;
    let dp_minus = map_step(State::new(s.n, p_lo))?;
    // divide by the perturbation actually applied, not the nominal 2·eps
    let (wn, wp) = (n_hi - n_lo, p_hi - p_lo);
    Ok(Jacobian2 {
        a11: (dn_plus.n - dn_minus.n) / wn,
        a12: (dp_plus.n - dp_minus.n) / wp,
        a21: (dn_plus.p - dn_minus.p) / wn,
        a22: (dp_plus.p - dp_minus.p) / wp,
    })
}

/// Residuals of the implicit NSFD difference equations
///
/// ```text
/// (N1 - N)/h = N - N·N1 - N1·P/(N + αP) + (N - N1)(N + αP)
/// (P1 - P)/h = βδP - βP1·P/N
/// ```
///
/// with `(N, P) = s` and `(N1, P1) = s_next`.
pub fn implicit_residual(params: &ModelParams, h: f64, s: State, s_next: State) -> (f64, f64) {
    let ModelParams { alpha, beta, delta } = *params;
    let (n, p, n1, p1) = (s.n, s.p, s_next.n, s_next.p);
    let b = n + alpha * p;
    let r_prey = (n1 - n) / h - (n - n * n1 - n1 * p / b + (n - n1) * b);
    let r_pred = (p1 - p) / h - (beta * delta * p - beta * p1 * p / n);
    (r_prey, r_pred)
}

/// Roots of `λ² - tr·λ + det = 0`, larger magnitude first.
///
/// For real roots the companion is recovered from `det/λ₁`, which avoids
/// cancellation in the smaller root.
pub fn quadratic_eigen(tr: f64, det: f64) -> [Complex64; 2] {
    let disc = tr * tr - 4.0 * det;
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let big = 0.5 * (tr + tr.signum() * sq);
        // signum(0.0) is 1, so `big` is zero only when tr = 0 and disc = 0
        let small = if big != 0.0 { det / big } else { 0.0 };
        [Complex64::new(big, 0.0), Complex64::new(small, 0.0)]
    } else {
        let re = 0.5 * tr;
        let im = 0.5 * (-disc).sqrt();
        [Complex64::new(re, im), Complex64::new(re, -im)]
    }
}
