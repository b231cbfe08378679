//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use dyncons::analysis::{
    classify, continuous_stability, euler_jacobian_at_interior, euler_threshold,
    nsfd_interior_factors, nsfd_jacobian_at_interior, simulation_stability_oracle, Classification,
    Jacobian2, Outcome,
};
use dyncons::bifurcation::{sweep, SweepConfig, SweepModel};
use dyncons::models::{interior_equilibrium, require_interior};
use dyncons::oracle::{fd_jacobian, DEFAULT_FD_EPS};
use dyncons::schemes::{
    euler_predprey_step, integrate_continuous_on_grid, iterate, nsfd_step, Component,
    DormandPrince, PlanarMap, PlanarScheme, ScalarScheme,
};
use dyncons::{ModelParams, ScalarModelParams, State};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

const REF: ModelParams = ModelParams::REFERENCE;
const S0: State = State::new(0.2, 0.2);

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

/// `[lo, hi]` lies in `[a, b]`, allowing for the binary representation of
/// grid points such as 0.66.
fn bracket_within(lo: f64, hi: f64, a: f64, b: f64) -> bool {
    lo >= a - 1e-9 && hi <= b + 1e-9
}

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Parameter triples with a stable coexistence point in the continuous model.
fn stable_triples(seed: u64, count: usize) -> Vec<ModelParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = ModelParams::new(
            rng.gen_range(0.05..3.0),
            rng.gen_range(0.05..3.0),
            rng.gen_range(0.05..3.0),
        )
        .unwrap();
        if continuous_stability(&p).stable {
            out.push(p);
        }
    }
    out
}

fn rel_entries(exact: &Jacobian2, approx: &Jacobian2) -> f64 {
    let scale = exact.entries().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    exact
        .entries()
        .iter()
        .zip(approx.entries())
        .map(|(a, b)| (a - b).abs() / scale)
        .fold(0.0, f64::max)
}

fn equilibrium() -> Verdict {
    let e = interior_equilibrium(&REF)
        .ok_or("no interior equilibrium")?
        .state;
    let got = (round4(e.n), round4(e.p));
    check(
        got == (0.5775, 0.3465),
        format!("E* = ({:.6}, {:.6})", e.n, e.p),
    )
}

fn threshold() -> Verdict {
    let t = euler_threshold(&REF).map_err(|e| e.to_string())?;
    let got = [
        round4(t.g_euler),
        round4(t.det_bound),
        round4(t.flip_bound),
        round4(t.h_max),
    ];
    check(
        got == [1.6533, 2.6293, 2.4393, 2.4393],
        format!(
            "G = {:.6}, G/H = {:.6}, 2(1+ad)^2/G = {:.6}, min = {:.6}",
            t.g_euler, t.det_bound, t.flip_bound, t.h_max
        ),
    )
}

fn time_series() -> Verdict {
    let e = require_interior(&REF).map_err(|e| e.to_string())?;
    let last = |scheme, h| -> Result<State, String> {
        let map = PlanarMap::new(scheme, REF, h).map_err(|e| e.to_string())?;
        let traj = iterate(&map, S0, 10_000).map_err(|e| e.to_string())?;
        Ok(traj.last().unwrap())
    };
    let euler_2 = last(PlanarScheme::Euler, 2.0)?.distance(&e);
    let nsfd_267 = last(PlanarScheme::Nsfd, 2.67)?.distance(&e);
    let label = simulation_stability_oracle(
        &PlanarMap::euler(REF, 2.67).map_err(|e| e.to_string())?,
        S0,
        10_000,
        128,
        1e-6,
    );
    check(
        euler_2 < 1e-4 && nsfd_267 < 1e-6 && label == Outcome::Oscillatory,
        format!(
            "Euler h=2 dist {euler_2:.1e}; Euler h=2.67 {label}; NSFD h=2.67 dist {nsfd_267:.1e}"
        ),
    )
}

fn logistic_sweep() -> Verdict {
    let cfg = SweepConfig {
        h_min: 0.1,
        h_max: 1.0,
        steps: 181,
        ..SweepConfig::default()
    };
    let model = SweepModel::Scalar {
        scheme: ScalarScheme::EulerLogistic,
        params: ScalarModelParams::new(3.0, 50.0, 1.0).unwrap(),
        x0: 0.4,
    };
    let data = sweep(&cfg, &model).map_err(|e| e.to_string())?;
    let counts = data.cluster_counts(Component::X, cfg.tol);
    let first_multi = counts
        .iter()
        .position(|(_, n)| *n > 1)
        .ok_or("no multi-cluster step")?;
    let monotone = counts[..first_multi].iter().all(|(_, n)| *n == 1)
        && counts[first_multi..].iter().all(|(_, n)| *n > 1);
    let (lo, hi) = (counts[first_multi - 1].0, counts[first_multi].0);
    check(
        monotone && bracket_within(lo, hi, 0.66, 0.68),
        format!("single cluster up to h = {lo:.3}, multi from h = {hi:.3}, monotone: {monotone}"),
    )
}

fn planar_sweep(
    scheme: PlanarScheme,
    h_min: f64,
    h_max: f64,
    steps: usize,
) -> Result<Vec<(f64, Outcome)>, String> {
    let cfg = SweepConfig {
        h_min,
        h_max,
        steps,
        ..SweepConfig::default()
    };
    let model = SweepModel::Planar {
        scheme,
        params: REF,
        s0: S0,
    };
    let data = sweep(&cfg, &model).map_err(|e| e.to_string())?;
    Ok(data.columns.iter().map(|c| (c.h, c.outcome)).collect())
}

fn euler_sweep() -> Verdict {
    let cols = planar_sweep(PlanarScheme::Euler, 0.1, 3.0, 291)?;
    let first = cols
        .iter()
        .position(|(_, o)| *o != Outcome::ConvergedToInterior)
        .ok_or("Euler converged on the whole grid")?;
    let (lo, hi) = (cols[first - 1].0, cols[first].0);
    check(
        bracket_within(lo, hi, 2.43, 2.45),
        format!(
            "converged up to h = {lo:.2}, {} from h = {hi:.2}; required within [2.43, 2.45]",
            cols[first].1
        ),
    )
}

fn nsfd_sweep() -> Verdict {
    let cols = planar_sweep(PlanarScheme::Nsfd, 0.1, 100.0, 1000)?;
    let bad: Vec<_> = cols
        .iter()
        .filter(|(_, o)| !o.is_converged_to_interior())
        .collect();
    check(
        bad.is_empty(),
        format!(
            "{}/{} steps in [0.1, 100] ConvergedToInterior",
            cols.len() - bad.len(),
            cols.len()
        ),
    )
}

fn positivity() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut violations = 0;
    for _ in 0..10_000 {
        let p = ModelParams::new(
            rng.gen_range(0.01..10.0),
            rng.gen_range(0.01..10.0),
            rng.gen_range(0.01..10.0),
        )
        .unwrap();
        let h = 10f64.powf(rng.gen_range(-4.0..2.0));
        let s = State::new(rng.gen_range(1e-3..10.0), rng.gen_range(1e-3..10.0));
        match nsfd_step(&p, h, s) {
            Ok(x) if x.n > 0.0 && x.p > 0.0 => {}
            _ => violations += 1,
        }
    }
    check(
        violations == 0,
        format!("{violations} violations in 10000 steps"),
    )
}

const H_GRID: [f64; 3] = [0.1, 2.0, 10.0];

fn jacobian_oracle() -> Verdict {
    let mut worst = 0.0_f64;
    for p in stable_triples(7, 20) {
        let e = require_interior(&p).unwrap();
        for h in H_GRID {
            let nsfd = nsfd_jacobian_at_interior(&p, h).unwrap();
            let fd = fd_jacobian(|s| nsfd_step(&p, h, s), e, DEFAULT_FD_EPS).unwrap();
            worst = worst.max(rel_entries(&nsfd, &fd));
            let euler = euler_jacobian_at_interior(&p, h).unwrap();
            let fd = fd_jacobian(|s| euler_predprey_step(&p, h, s), e, DEFAULT_FD_EPS).unwrap();
            worst = worst.max(rel_entries(&euler, &fd));
        }
    }
    check(
        worst < 1e-6,
        format!("max relative error {worst:.2e} over 120 Jacobians"),
    )
}

fn identities() -> Verdict {
    let mut worst = 0.0_f64;
    for p in stable_triples(7, 20) {
        let e = require_interior(&p).unwrap();
        let ModelParams { alpha, beta, delta } = p;
        for h in H_GRID {
            let j = euler_jacobian_at_interior(&p, h).unwrap();
            let expect = h * h * beta * e.p;
            let got = 1.0 - j.trace() + j.det();
            worst = worst.max((got - expect).abs() / expect.abs());

            let j = nsfd_jacobian_at_interior(&p, h).unwrap();
            let f = nsfd_interior_factors(&p, h).unwrap();
            let expect =
                beta * delta * h * h * e.n * e.n * (1.0 + alpha * delta - delta) / (f.g_n * f.h_n);
            let got = 1.0 - j.trace() + j.det();
            worst = worst.max((got - expect).abs() / expect.abs());
        }
    }
    check(worst < 1e-10, format!("max relative error {worst:.2e}"))
}

fn elementary_stability() -> Verdict {
    let mut stable = 0;
    for p in stable_triples(9, 100) {
        for h in [0.01, 0.1, 1.0, 10.0, 100.0] {
            let r = classify(&nsfd_jacobian_at_interior(&p, h).unwrap());
            stable += (r.classification == Classification::Stable) as usize;
        }
    }
    check(stable == 500, format!("{stable}/500 Stable"))
}

fn consistency_order() -> Verdict {
    let reference = integrate_continuous_on_grid(
        &REF,
        S0,
        1.0,
        1,
        &DormandPrince::with_tolerances(1e-13, 1e-15),
    )
    .map_err(|e| e.to_string())?
    .states[1];
    let err = |step: fn(&ModelParams, f64, State) -> dyncons::Result<State>, h: f64| {
        let mut s = S0;
        for _ in 0..(1.0 / h).round() as usize {
            s = step(&REF, h, s).unwrap();
        }
        s.distance(&reference)
    };
    let nsfd = err(nsfd_step, 1e-2) / err(nsfd_step, 5e-3);
    let euler = err(euler_predprey_step, 1e-2) / err(euler_predprey_step, 5e-3);
    let ok = |r: f64| (1.6..=2.4).contains(&r);
    check(
        ok(nsfd) && ok(euler),
        format!("error ratios: NSFD {nsfd:.4}, Euler {euler:.4}"),
    )
}

fn determinism() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_dyncons");
    let args = [
        "bifurcate",
        "--scheme",
        "euler",
        "--h-min",
        "0.1",
        "--h-max",
        "3",
        "--grid",
        "291",
    ];
    let run = |jobs: &str| {
        Command::new(bin)
            .args(args)
            .args(["--jobs", jobs])
            .output()
            .map_err(|e| e.to_string())
    };
    let a = run("1")?;
    let b = run("8")?;
    check(
        a.status.success() && b.status.success() && a.stdout == b.stdout,
        format!(
            "{} bytes, identical: {}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("1  equilibrium reproduction", equilibrium),
        ("2  threshold reproduction", threshold),
        ("3  time series at h = 2 and 2.67", time_series),
        ("4  logistic period-doubling sweep", logistic_sweep),
        ("5a Euler sweep transition in [2.43, 2.45]", euler_sweep),
        ("5b NSFD sweep converges on [0.1, 100]", nsfd_sweep),
        ("6  NSFD positivity", positivity),
        ("7  Jacobian oracle equivalence", jacobian_oracle),
        ("8  analytic identities", identities),
        ("9  elementary stability", elementary_stability),
        ("10 consistency order", consistency_order),
        ("11 determinism across worker counts", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let verdict = f();
        let ms = start.elapsed().as_secs_f64() * 1e3;
        match verdict {
            Ok(d) => println!("[PASS] {name}: {d} ({ms:.0} ms)"),
            Err(d) => {
                failed += 1;
                println!("[FAIL] {name}: {d} ({ms:.0} ms)");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
