//! Dormand–Prince 5(4) integrator with PI step-size control, used as the
//! reference solution of the continuous systems.

use crate::error::{Error, Result};
use crate::models::{rhs_logistic, rhs_predprey, ModelParams, ScalarModelParams, State};

use super::trajectory::Trajectory;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
// fifth-order weights, also the last stage row (FSAL)
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between fifth- and fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Adaptive embedded Runge–Kutta 5(4) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DormandPrince {
    pub rtol: f64,
    pub atol: f64,
    /// Steps proposed below this size abort with [`Error::StepFailure`].
    pub min_step: f64,
    pub max_steps: usize,
    pub safety: f64,
    /// Bounds on the step-size ratio `h_new / h`.
    pub min_factor: f64,
    pub max_factor: f64,
    /// PI stabilisation exponent.
    pub beta: f64,
}

impl Default for DormandPrince {
    fn default() -> Self {
        DormandPrince {
            rtol: 1e-8,
            atol: 1e-10,
            min_step: 1e-12,
            max_steps: 10_000_000,
            safety: 0.9,
            min_factor: 0.2,
            max_factor: 10.0,
            beta: 0.04,
        }
    }
}

fn axpy<const D: usize>(y: &[f64; D], terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += c * k[i];
        }
    }
    out
}

impl DormandPrince {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        DormandPrince {
            rtol,
            atol,
            ..Default::default()
        }
    }

    /// Rejects tolerances outside `(0, 1e-2]`.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("rel_tol", self.rtol), ("abs_tol", self.atol)] {
            if !(v > 0.0 && v <= 1e-2) {
                return Err(Error::invalid(format!(
                    "{name} must lie in (0, 1e-2], got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Integrates `y' = f(t, y)` from `t0` and returns `y` at the output
    /// times `t0 + k·dt`, `k = 0..=samples`. Steps are clipped so that every
    /// output time is hit exactly. A failed right-hand-side evaluation inside
    /// a step rejects the step and retries with a smaller one.
    pub fn solve<const D: usize, F>(
        &self,
        f: F,
        t0: f64,
        y0: [f64; D],
        dt: f64,
        samples: usize,
    ) -> Result<Vec<[f64; D]>>
    where
        F: Fn(f64, &[f64; D]) -> Result<[f64; D]>,
    {
        self.validate()?;
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid(format!(
                "output spacing must be positive, got {dt}"
            )));
        }
        let mut out = Vec::with_capacity(samples + 1);
        out.push(y0);
        let mut t = t0;
        let mut y = y0;
        let mut k1 = f(t, &y)?;
        let mut h = self.initial_step(&y, &k1, dt);
        let mut facold: f64 = 1e-4;
        let mut steps = 0usize;
        let expo1 = 0.2 - self.beta * 0.75;

        for k in 1..=samples {
            let t_target = t0 + k as f64 * dt;
            while t < t_target {
                steps += 1;
                if steps > self.max_steps {
                    return Err(Error::StepFailure {
                        t,
                        step: h,
                        min_step: self.min_step,
                    });
                }
                if h < self.min_step {
                    return Err(Error::StepFailure {
                        t,
                        step: h,
                        min_step: self.min_step,
                    });
                }
                let remaining = t_target - t;
                // land exactly on the output time instead of leaving a sliver
                let (h_try, lands) = if h >= remaining * (1.0 - 1e-12) {
                    (remaining, true)
                } else {
                    (h, false)
                };

                let stage = |c: f64, yy: [f64; D]| f(t + c * h_try, &yy);
                let attempt = (|| -> Result<([f64; D], [f64; D], f64)> {
                    let k2 = stage(C2, axpy(&y, &[(h_try * A21, &k1)]))?;
                    let k3 = stage(C3, axpy(&y, &[(h_try * A31, &k1), (h_try * A32, &k2)]))?;
                    let k4 = stage(
                        C4,
                        axpy(
                            &y,
                            &[(h_try * A41, &k1), (h_try * A42, &k2), (h_try * A43, &k3)],
                        ),
                    )?;
                    let k5 = stage(
                        C5,
                        axpy(
                            &y,
                            &[
                                (h_try * A51, &k1),
                                (h_try * A52, &k2),
                                (h_try * A53, &k3),
                                (h_try * A54, &k4),
                            ],
                        ),
                    )?;
                    let k6 = stage(
                        1.0,
                        axpy(
                            &y,
                            &[
                                (h_try * A61, &k1),
                                (h_try * A62, &k2),
                                (h_try * A63, &k3),
                                (h_try * A64, &k4),
                                (h_try * A65, &k5),
                            ],
                        ),
                    )?;
                    let y_new = axpy(
                        &y,
                        &[
                            (h_try * B1, &k1),
                            (h_try * B3, &k3),
                            (h_try * B4, &k4),
                            (h_try * B5, &k5),
                            (h_try * B6, &k6),
                        ],
                    );
                    let k7 = f(t + h_try, &y_new)?;
                    let mut err2 = 0.0;
                    for i in 0..D {
                        let e = h_try
                            * (E1 * k1[i]
                                + E3 * k3[i]
                                + E4 * k4[i]
                                + E5 * k5[i]
                                + E6 * k6[i]
                                + E7 * k7[i]);
                        let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                        err2 += (e / sc) * (e / sc);
                    }
                    Ok((y_new, k7, (err2 / D as f64).sqrt()))
                })();

                match attempt {
                    Ok((y_new, k7, err)) if err.is_finite() && err <= 1.0 => {
                        let fac11 = err.powf(expo1);
                        let fac = (fac11 / facold.powf(self.beta) / self.safety)
                            .clamp(1.0 / self.max_factor, 1.0 / self.min_factor);
                        facold = err.max(1e-4);
                        let proposed = h_try / fac;
                        t = if lands { t_target } else { t + h_try };
                        y = y_new;
                        k1 = k7;
                        // a clipped step says little about the natural step size
                        h = if lands { proposed.max(h) } else { proposed };
                    }
                    Ok((_, _, err)) if err.is_finite() => {
                        let fac11 = err.powf(expo1);
                        h = h_try / (1.0 / self.min_factor).min(fac11 / self.safety);
                    }
                    // non-finite error estimate or a stage left the domain
                    _ => h = h_try * 0.25,
                }
            }
            out.push(y);
        }
        Ok(out)
    }

    fn initial_step<const D: usize>(&self, y: &[f64; D], f0: &[f64; D], dt: f64) -> f64 {
        let mut d0 = 0.0;
        let mut d1 = 0.0;
        for i in 0..D {
            let sc = self.atol + self.rtol * y[i].abs();
            d0 += (y[i] / sc).powi(2);
            d1 += (f0[i] / sc).powi(2);
        }
        let (d0, d1) = ((d0 / D as f64).sqrt(), (d1 / D as f64).sqrt());
        let h = if d0 < 1e-5 || d1 < 1e-5 {
            1e-6
        } else {
            0.01 * d0 / d1
        };
        h.min(dt)
    }
}

/// Samples the predator–prey solution at `t = k·dt`, `k = 0..=steps`.
pub fn integrate_continuous_on_grid(
    params: &ModelParams,
    s0: State,
    dt: f64,
    steps: usize,
    solver: &DormandPrince,
) -> Result<Trajectory<State>> {
    if !(s0.n > 0.0) {
        return Err(Error::Domain(format!(
            "prey density must be positive, got N = {}",
            s0.n
        )));
    }
    let f = |_t: f64, y: &[f64; 2]| {
        let d = rhs_predprey(params, State::new(y[0], y[1]))?;
        Ok([d.n, d.p])
    };
    let ys = solver.solve(f, 0.0, [s0.n, s0.p], dt, steps)?;
    Ok(Trajectory {
        t0: 0.0,
        h: dt,
        offset: 0,
        states: ys.into_iter().map(|y| State::new(y[0], y[1])).collect(),
    })
}

/// Reference solution of the predator–prey system on `[0, t_end]`, sampled
/// at 1000 equally spaced intervals.
pub fn integrate_continuous(
    params: &ModelParams,
    s0: State,
    t_end: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Trajectory<State>> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::invalid(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    const SAMPLES: usize = 1000;
    integrate_continuous_on_grid(
        params,
        s0,
        t_end / SAMPLES as f64,
        SAMPLES,
        &DormandPrince::with_tolerances(rel_tol, abs_tol),
    )
}

/// Reference solution of the logistic equation, sampled at `k·dt`.
pub fn integrate_logistic(
    sp: &ScalarModelParams,
    x0: f64,
    dt: f64,
    steps: usize,
    solver: &DormandPrince,
) -> Result<Trajectory<f64>> {
    let ys = solver.solve(
        |_t, y: &[f64; 1]| Ok([rhs_logistic(sp, y[0])]),
        0.0,
        [x0],
        dt,
        steps,
    )?;
    Ok(Trajectory {
        t0: 0.0,
        h: dt,
        offset: 0,
        states: ys.into_iter().map(|y| y[0]).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::interior_equilibrium;

    #[test]
    fn exponential_decay_matches_closed_form() {
        let dp = DormandPrince::default();
        let ys = dp
            .solve(|_t, y: &[f64; 1]| Ok([-y[0]]), 0.0, [1.0], 0.1, 50)
            .unwrap();
        for (k, y) in ys.iter().enumerate() {
            let exact = (-(k as f64) * 0.1).exp();
            assert!((y[0] - exact).abs() < 1e-8, "k={k}: {} vs {exact}", y[0]);
        }
    }

    #[test]
    fn harmonic_oscillator_keeps_phase() {
        let dp = DormandPrince::with_tolerances(1e-10, 1e-12);
        let ys = dp
            .solve(
                |_t, y: &[f64; 2]| Ok([y[1], -y[0]]),
                0.0,
                [1.0, 0.0],
                0.5,
                40,
            )
            .unwrap();
        let y = ys.last().unwrap();
        assert!((y[0] - 20f64.cos()).abs() < 1e-8);
        assert!((y[1] + 20f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn reference_orbit_converges_to_coexistence() {
        let p = ModelParams::REFERENCE;
        let e = interior_equilibrium(&p).unwrap().state;
        let tr = integrate_continuous(&p, State::new(0.2, 0.2), 500.0, 1e-8, 1e-10).unwrap();
        assert!(tr.len() >= 201);
        assert!(tr.last().unwrap().distance(&e) < 1e-4);
        assert!((tr.time(tr.len() - 1) - 500.0).abs() < 1e-9);
    }

    #[test]
    fn equilibrium_start_stays_put() {
        let p = ModelParams::REFERENCE;
        let e = interior_equilibrium(&p).unwrap().state;
        let tr = integrate_continuous(&p, e, 100.0, 1e-8, 1e-10).unwrap();
        assert!(tr.states.iter().all(|s| s.distance(&e) < 1e-6));
    }

    #[test]
    fn logistic_reaches_capacity() {
        let sp = ScalarModelParams::default();
        let tr = integrate_logistic(&sp, 0.4, 0.05, 200, &DormandPrince::default()).unwrap();
        assert!((tr.last().unwrap() - 50.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_tolerances_and_inputs() {
        let p = ModelParams::REFERENCE;
        let s = State::new(0.2, 0.2);
        assert!(integrate_continuous(&p, s, 10.0, 0.0, 1e-10).is_err());
        assert!(integrate_continuous(&p, s, 10.0, 1e-8, 0.5).is_err());
        assert!(integrate_continuous(&p, s, -1.0, 1e-8, 1e-10).is_err());
        assert!(integrate_continuous(&p, State::new(0.0, 0.2), 10.0, 1e-8, 1e-10).is_err());
    }

    #[test]
    fn blow_up_reports_step_failure() {
        // y' = y^2 from y(0) = 1 explodes at t = 1
        let dp = DormandPrince::default();
        let r = dp.solve(|_t, y: &[f64; 1]| Ok([y[0] * y[0]]), 0.0, [1.0], 0.5, 4);
        assert!(matches!(r, Err(Error::StepFailure { .. })), "{r:?}");
    }
}
