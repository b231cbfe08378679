use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use super::output::{self, manifest_path, with_file, RunManifest};
use super::{CliError, CliResult, Settings};
use crate::analysis::{
    classify, euler_critical_step, euler_jacobian_at_interior, euler_threshold, label_window,
    nsfd_jacobian_at_interior, Outcome,
};
use crate::bifurcation::{sweep, SweepConfig, SweepModel};
use crate::models::{
    interior_equilibrium, require_interior, ModelParams, ScalarModelParams, State,
};
use crate::schemes::{
    integrate_continuous_on_grid, iterate, Component, DormandPrince, OrbitFailure, PlanarMap,
    PlanarScheme, ScalarMap, ScalarScheme, Scheme, Trajectory,
};

pub(crate) const DEFAULT_H: f64 = 0.1;
pub(crate) const DEFAULT_S0: State = State::new(0.2, 0.2);
pub(crate) const DEFAULT_X0: f64 = 0.4;
pub(crate) const DEFAULT_STEPS: usize = 1000;
pub(crate) const DEFAULT_T_END: f64 = 500.0;
pub(crate) const DEFAULT_LABEL_TOL: f64 = 1e-6;
pub(crate) const LABEL_WINDOW: usize = 128;

pub(crate) fn model_params(s: &Settings) -> CliResult<ModelParams> {
    let r = ModelParams::REFERENCE;
    Ok(ModelParams::new(
        s.alpha.unwrap_or(r.alpha),
        s.beta.unwrap_or(r.beta),
        s.delta.unwrap_or(r.delta),
    )?)
}

pub(crate) fn scalar_params(s: &Settings) -> CliResult<ScalarModelParams> {
    let d = ScalarModelParams::default();
    Ok(ScalarModelParams::new(
        s.r.unwrap_or(d.r),
        s.k.unwrap_or(d.k),
        s.lambda.unwrap_or(d.lambda),
    )?)
}

fn scheme(s: &Settings) -> CliResult<Scheme> {
    Ok(s.scheme.as_deref().unwrap_or("nsfd").parse::<Scheme>()?)
}

fn planar_scheme(s: Scheme) -> Option<PlanarScheme> {
    match s {
        Scheme::Nsfd => Some(PlanarScheme::Nsfd),
        Scheme::EulerPredPrey => Some(PlanarScheme::Euler),
        _ => None,
    }
}

fn scalar_scheme(s: Scheme) -> Option<ScalarScheme> {
    match s {
        Scheme::EulerLogistic => Some(ScalarScheme::EulerLogistic),
        Scheme::EulerDecay => Some(ScalarScheme::EulerDecay),
        _ => None,
    }
}

pub(crate) fn initial_state(s: &Settings) -> CliResult<State> {
    let s0 = State::new(s.n0.unwrap_or(DEFAULT_S0.n), s.p0.unwrap_or(DEFAULT_S0.p));
    if !(s0.is_finite() && s0.n > 0.0 && s0.p >= 0.0) {
        return Err(CliError::Invalid(format!(
            "initial state needs N0 > 0 and P0 >= 0, got ({}, {})",
            s0.n, s0.p
        )));
    }
    Ok(s0)
}

fn initial_scalar(s: &Settings) -> CliResult<f64> {
    let x0 = s.x0.unwrap_or(DEFAULT_X0);
    if !x0.is_finite() {
        return Err(CliError::Invalid(format!("x0 must be finite, got {x0}")));
    }
    Ok(x0)
}

fn step_size(s: &Settings) -> CliResult<f64> {
    let h = s.h.unwrap_or(DEFAULT_H);
    if !(h.is_finite() && h > 0.0) {
        return Err(CliError::Invalid(format!(
            "h must be positive and finite, got {h}"
        )));
    }
    Ok(h)
}

fn state_json(s: State) -> Value {
    json!({ "n": s.n, "p": s.p })
}

fn params_json(p: &ModelParams) -> Value {
    json!({ "alpha": p.alpha, "beta": p.beta, "delta": p.delta })
}

fn write_json(w: &mut dyn Write, v: &impl Serialize) -> CliResult {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.into()))?;
    writeln!(w, "{text}")?;
    Ok(())
}

type Emit = Box<dyn Fn(&mut dyn Write) -> std::io::Result<Option<OrbitFailure>>>;

pub(crate) fn simulate(s: &Settings, out: Option<&Path>, stdout: &mut dyn Write) -> CliResult {
    let scheme = scheme(s)?;
    let h = step_size(s)?;
    let steps = s.steps.unwrap_or(DEFAULT_STEPS);

    let (params, emit): (Value, Emit) = if let Some(ps) = planar_scheme(scheme) {
        let mp = model_params(s)?;
        let s0 = initial_state(s)?;
        let map = PlanarMap::new(ps, mp, h)?;
        (
            json!({ "scheme": scheme.name(), "params": params_json(&mp), "h": h,
                        "s0": state_json(s0), "steps": steps }),
            Box::new(move |mut w: &mut dyn Write| output::write_orbit(&mut w, &map, s0, steps)),
        )
    } else {
        let ss = scalar_scheme(scheme).expect("every scheme is planar or scalar");
        let sp = scalar_params(s)?;
        let x0 = initial_scalar(s)?;
        let map = ScalarMap::new(ss, sp, h)?;
        (
            json!({ "scheme": scheme.name(), "r": sp.r, "k": sp.k, "lambda": sp.lambda,
                        "h": h, "x0": x0, "steps": steps }),
            Box::new(move |mut w: &mut dyn Write| output::write_orbit(&mut w, &map, x0, steps)),
        )
    };

    let failure = match out {
        Some(path) => {
            let f = with_file(path, |w| emit(w))?;
            RunManifest::new("simulate", params, vec![path.display().to_string()])
                .write(&manifest_path(path))?;
            f
        }
        None => emit(stdout)?,
    };
    match failure {
        None => Ok(()),
        Some(f) => Err(CliError::Numerical(format!(
            "trajectory failed at k={}: {}",
            f.index, f.error
        ))),
    }
}

pub(crate) fn stability_json(scheme: Scheme, mp: &ModelParams, h: f64) -> CliResult<Value> {
    let e = require_interior(mp)?;
    let j = match scheme {
        Scheme::Nsfd => nsfd_jacobian_at_interior(mp, h)?,
        Scheme::EulerPredPrey => euler_jacobian_at_interior(mp, h)?,
        other => {
            return Err(CliError::Invalid(format!(
                "stability needs a predator-prey scheme (nsfd or euler), got {other}"
            )))
        }
    };
    let mut v = serde_json::to_value(classify(&j)).map_err(|e| CliError::Io(e.into()))?;
    let obj = v.as_object_mut().expect("report serializes as an object");
    obj.insert("scheme".into(), json!(scheme.name()));
    obj.insert("h".into(), json!(h));
    obj.insert("params".into(), params_json(mp));
    obj.insert("equilibrium".into(), state_json(e));
    if scheme == Scheme::EulerPredPrey {
        // the sufficient bound exists only when the ODE equilibrium is stable
        if let Ok(t) = euler_threshold(mp) {
            obj.insert("threshold".into(), json!(t));
        }
        obj.insert("critical_step".into(), json!(euler_critical_step(mp)?));
    }
    Ok(v)
}

pub(crate) fn stability(s: &Settings, stdout: &mut dyn Write) -> CliResult {
    let scheme = scheme(s)?;
    let mp = model_params(s)?;
    let h = step_size(s)?;
    write_json(stdout, &stability_json(scheme, &mp, h)?)
}

pub(crate) fn sweep_config(s: &Settings) -> SweepConfig {
    let d = SweepConfig::default();
    SweepConfig {
        h_min: s.h_min.unwrap_or(d.h_min),
        h_max: s.h_max.unwrap_or(d.h_max),
        steps: s.grid.unwrap_or(d.steps),
        transient: s.transient.unwrap_or(d.transient),
        samples: s.samples.unwrap_or(d.samples),
        tol: s.tol.unwrap_or(d.tol),
        warm_start: s.warm_start.unwrap_or(d.warm_start),
        jobs: s.jobs.or(d.jobs),
    }
}

fn sweep_model(s: &Settings) -> CliResult<(SweepModel, Value)> {
    let scheme = scheme(s)?;
    Ok(match (planar_scheme(scheme), scalar_scheme(scheme)) {
        (Some(ps), _) => {
            let params = model_params(s)?;
            let s0 = initial_state(s)?;
            (
                SweepModel::Planar {
                    scheme: ps,
                    params,
                    s0,
                },
                json!({ "scheme": scheme.name(), "params": params_json(&params), "s0": state_json(s0) }),
            )
        }
        (None, Some(ss)) => {
            let params = scalar_params(s)?;
            let x0 = initial_scalar(s)?;
            (
                SweepModel::Scalar {
                    scheme: ss,
                    params,
                    x0,
                },
                json!({ "scheme": scheme.name(), "r": params.r, "k": params.k,
                        "lambda": params.lambda, "x0": x0 }),
            )
        }
        (None, None) => unreachable!("every scheme is planar or scalar"),
    })
}

fn sweep_json(c: &SweepConfig) -> Value {
    // jobs is deliberately absent: it does not affect the output
    json!({ "h_min": c.h_min, "h_max": c.h_max, "grid": c.steps, "transient": c.transient,
            "samples": c.samples, "tol": c.tol, "warm_start": c.warm_start })
}

pub(crate) fn bifurcate(
    s: &Settings,
    out: Option<&Path>,
    plot_script: Option<&Path>,
    stdout: &mut dyn Write,
) -> CliResult {
    let (model, mut params) = sweep_model(s)?;
    let cfg = sweep_config(s);
    cfg.validate()?;
    if plot_script.is_some() && out.is_none() {
        return Err(CliError::Invalid("--plot-script needs --out".into()));
    }
    let data = sweep(&cfg, &model)?;
    params["sweep"] = sweep_json(&cfg);

    let Some(path) = out else {
        output::write_bifurcation(&mut &mut *stdout, &data)?;
        return Ok(());
    };
    with_file(path, |w| output::write_bifurcation(w, &data))?;
    let mut outputs = vec![path.display().to_string()];
    if let Some(script) = plot_script {
        let component = match model {
            SweepModel::Planar { .. } => Component::N,
            SweepModel::Scalar { .. } => Component::X,
        };
        let csv = path.display().to_string();
        let png = path.with_extension("png").display().to_string();
        std::fs::write(
            script,
            output::bifurcation_script(&csv, &png, component, "step-size bifurcation diagram"),
        )?;
        outputs.push(script.display().to_string());
    }
    RunManifest::new("bifurcate", params, outputs).write(&manifest_path(path))?;
    Ok(())
}

/// One discrete or continuous series of a comparison run.
#[derive(Debug, Clone, Serialize)]
pub(crate) struct SeriesSummary {
    pub name: &'static str,
    pub file: String,
    pub terminal_state: Option<Value>,
    pub terminal_distance: Option<f64>,
    pub max_distance: Option<f64>,
    pub label: String,
    pub failure: Option<String>,
}

fn summarize(
    name: &'static str,
    file: &str,
    traj: &Trajectory<State>,
    failure: Option<String>,
    target: Option<State>,
    diverged_at: Option<usize>,
    tol: f64,
) -> SeriesSummary {
    let outcome = match diverged_at {
        Some(step) => Outcome::Diverged { step },
        None => label_window(traj.tail(LABEL_WINDOW), target, tol),
    };
    let dist = |x: &State| target.map(|t| x.distance(&t));
    SeriesSummary {
        name,
        file: file.to_string(),
        terminal_state: traj.last().map(state_json),
        terminal_distance: traj.last().as_ref().and_then(dist),
        max_distance: target.map(|t| {
            traj.states
                .iter()
                .map(|x| x.distance(&t))
                .fold(0.0, f64::max)
        }),
        label: outcome.to_string(),
        failure,
    }
}

/// Computes the three aligned series and writes them plus `summary.json`
/// into `dir`. Returns the summary and whether any series failed.
pub(crate) fn compare_into(s: &Settings, dir: &Path) -> CliResult<(Value, Vec<String>, bool)> {
    let mp = model_params(s)?;
    let h = step_size(s)?;
    let s0 = initial_state(s)?;
    let t_end = s.t_end.unwrap_or(DEFAULT_T_END);
    if !(t_end.is_finite() && t_end >= h) {
        return Err(CliError::Invalid(format!(
            "t_end must be at least h = {h}, got {t_end}"
        )));
    }
    let steps = (t_end / h).round() as usize;
    let tol = s.tol.unwrap_or(DEFAULT_LABEL_TOL);
    let d = DormandPrince::default();
    let solver = DormandPrince::with_tolerances(s.rtol.unwrap_or(d.rtol), s.atol.unwrap_or(d.atol));
    solver.validate()?;
    let target = interior_equilibrium(&mp).map(|e| e.state);
    std::fs::create_dir_all(dir)?;

    let mut series = Vec::new();
    let mut files = Vec::new();
    let mut failed = false;

    let file = "continuous.csv";
    let summary = match integrate_continuous_on_grid(&mp, s0, h, steps, &solver) {
        Ok(traj) => {
            with_file(&dir.join(file), |w| {
                output::write_trajectory(w, &traj, None)
            })?;
            summarize("continuous", file, &traj, None, target, None, tol)
        }
        Err(e) => {
            failed = true;
            let empty = Trajectory {
                t0: 0.0,
                h,
                offset: 0,
                states: Vec::new(),
            };
            with_file(&dir.join(file), |w| {
                output::write_trajectory(w, &empty, None)?;
                writeln!(w, "# integration failed: {e}")
            })?;
            let mut sum = summarize(
                "continuous",
                file,
                &empty,
                Some(e.to_string()),
                target,
                None,
                tol,
            );
            sum.label = "IntegrationFailed".into();
            sum
        }
    };
    series.push(summary);
    files.push(file.to_string());

    for (name, ps) in [("nsfd", PlanarScheme::Nsfd), ("euler", PlanarScheme::Euler)] {
        let file = format!("{name}.csv");
        let map = PlanarMap::new(ps, mp, h)?;
        let sum = match iterate(&map, s0, steps) {
            Ok(traj) => {
                with_file(&dir.join(&file), |w| {
                    output::write_trajectory(w, &traj, None)
                })?;
                summarize(name, &file, &traj, None, target, None, tol)
            }
            Err(e) => {
                failed = true;
                with_file(&dir.join(&file), |w| {
                    output::write_trajectory(w, &e.partial, Some((e.index, &e.error)))
                })?;
                let msg = format!("{} at k={}", e.error, e.index);
                summarize(
                    name,
                    &file,
                    &e.partial,
                    Some(msg),
                    target,
                    Some(e.index),
                    tol,
                )
            }
        };
        series.push(sum);
        files.push(file);
    }

    let summary = json!({
        "params": params_json(&mp),
        "h": h,
        "t_end": steps as f64 * h,
        "steps": steps,
        "s0": state_json(s0),
        "equilibrium": target.map(state_json),
        "label_tol": tol,
        "reference": { "rtol": solver.rtol, "atol": solver.atol },
        "series": series,
    });
    let mut text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Io(e.into()))?;
    text.push('\n');
    std::fs::write(dir.join("summary.json"), text)?;
    files.push("summary.json".into());
    Ok((summary, files, failed))
}

pub(crate) fn compare(s: &Settings, dir: &Path, stdout: &mut dyn Write) -> CliResult {
    let (summary, mut files, failed) = compare_into(s, dir)?;
    let mut params = summary.clone();
    if let Some(obj) = params.as_object_mut() {
        obj.remove("series");
    }
    files.push("manifest.json".into());
    RunManifest::new("compare", params, files).write(&dir.join("manifest.json"))?;
    for sum in summary["series"].as_array().into_iter().flatten() {
        writeln!(
            stdout,
            "{}: {} (terminal distance {})",
            sum["name"].as_str().unwrap_or("?"),
            sum["label"].as_str().unwrap_or("?"),
            sum["terminal_distance"]
        )?;
    }
    if failed {
        return Err(CliError::Numerical(
            "at least one series failed; see summary.json".into(),
        ));
    }
    Ok(())
}
