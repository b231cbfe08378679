//! Regenerates every figure dataset, its gnuplot script and a manifest.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};

use super::commands::{
    compare_into, initial_state, model_params, scalar_params, stability_json, sweep_config,
    DEFAULT_X0,
};
use super::output::{self, with_file, RunManifest};
use super::{CliError, CliResult, Settings};
use crate::bifurcation::{sweep, SweepConfig, SweepModel};
use crate::schemes::{
    integrate_logistic, iterate, Component, DormandPrince, PlanarMap, PlanarScheme, ScalarScheme,
    Scheme,
};

struct Repro<'a> {
    dir: &'a Path,
    outputs: Vec<String>,
    entries: Map<String, Value>,
}

impl Repro<'_> {
    fn script(&mut self, name: &str, text: String) -> CliResult {
        std::fs::write(self.dir.join(name), text)?;
        self.outputs.push(name.to_string());
        Ok(())
    }

    fn record(&mut self, figure: &str, files: &[&str], params: Value) {
        self.outputs.extend(files.iter().map(|f| f.to_string()));
        self.entries.insert(
            figure.to_string(),
            json!({ "files": files, "parameters": params }),
        );
    }

    fn bifurcation(
        &mut self,
        figure: &str,
        title: &str,
        cfg: &SweepConfig,
        model: SweepModel,
        component: Component,
        model_json: Value,
    ) -> CliResult {
        let data = sweep(cfg, &model)?;
        let csv = format!("{figure}.csv");
        with_file(&self.dir.join(&csv), |w| {
            output::write_bifurcation(w, &data)
        })?;
        self.record(
            figure,
            &[&csv],
            json!({ "model": model_json, "h_min": cfg.h_min, "h_max": cfg.h_max,
                    "grid": cfg.steps, "transient": cfg.transient, "samples": cfg.samples,
                    "tol": cfg.tol }),
        );
        self.script(
            &format!("{figure}.gp"),
            output::bifurcation_script(&csv, &format!("{figure}.png"), component, title),
        )
    }
}

fn default_dir() -> PathBuf {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    PathBuf::from(format!("repro-{secs}"))
}

pub(crate) fn repro(s: &Settings, out_dir: Option<&Path>, stdout: &mut dyn Write) -> CliResult {
    let dir = out_dir.map(Path::to_path_buf).unwrap_or_else(default_dir);
    std::fs::create_dir_all(&dir)?;
    let mp = model_params(s)?;
    let sp = scalar_params(s)?;
    let s0 = initial_state(s)?;
    let x0 = s.x0.unwrap_or(DEFAULT_X0);
    let jobs = s.jobs;
    if jobs == Some(0) {
        return Err(CliError::Invalid("jobs must be at least 1".into()));
    }
    let mut r = Repro {
        dir: &dir,
        outputs: Vec::new(),
        entries: Map::new(),
    };
    let logistic_json = json!({ "r": sp.r, "k": sp.k, "x0": x0 });
    let planar_json = json!({ "alpha": mp.alpha, "beta": mp.beta, "delta": mp.delta,
                              "s0": { "n": s0.n, "p": s0.p } });

    // fig1: continuous logistic growth
    let (dt, steps) = (0.01, 500);
    let traj = integrate_logistic(&sp, x0, dt, steps, &DormandPrince::default())?;
    with_file(&dir.join("fig1.csv"), |w| {
        output::write_trajectory(w, &traj, None)
    })?;
    r.record(
        "fig1",
        &["fig1.csv"],
        json!({ "model": logistic_json, "dt": dt, "steps": steps }),
    );
    r.script(
        "fig1.gp",
        output::time_series_script("fig1.csv", "fig1.png", &[Component::X], "logistic growth"),
    )?;

    // fig2: Euler logistic sweep
    let cfg = SweepConfig {
        h_min: 0.1,
        h_max: 1.0,
        steps: 181,
        jobs,
        ..sweep_config(&Settings::default())
    };
    let model = SweepModel::Scalar {
        scheme: ScalarScheme::EulerLogistic,
        params: sp,
        x0,
    };
    r.bifurcation(
        "fig2",
        "Euler logistic map",
        &cfg,
        model,
        Component::X,
        logistic_json.clone(),
    )?;

    // fig3: phase portraits, continuous vs NSFD vs Euler
    let fig3 = Settings {
        alpha: Some(mp.alpha),
        beta: Some(mp.beta),
        delta: Some(mp.delta),
        n0: Some(s0.n),
        p0: Some(s0.p),
        h: Some(0.1),
        t_end: Some(500.0),
        ..Default::default()
    };
    let (summary, files, _) = compare_into(&fig3, &dir.join("fig3"))?;
    let files: Vec<String> = files.iter().map(|f| format!("fig3/{f}")).collect();
    r.record(
        "fig3",
        &files.iter().map(String::as_str).collect::<Vec<_>>(),
        summary,
    );
    r.script(
        "fig3.gp",
        output::phase_script(
            &[
                ("fig3/continuous.csv", "continuous"),
                ("fig3/nsfd.csv", "NSFD"),
                ("fig3/euler.csv", "Euler"),
            ],
            "fig3.png",
            "phase portraits, h = 0.1",
        ),
    )?;

    // fig4: prey bifurcation diagrams, Euler then NSFD
    let euler = SweepConfig {
        h_min: 0.1,
        h_max: 3.0,
        steps: 291,
        jobs,
        ..sweep_config(&Settings::default())
    };
    let planar = |scheme| SweepModel::Planar {
        scheme,
        params: mp,
        s0,
    };
    r.bifurcation(
        "fig4a",
        "Euler predator-prey map",
        &euler,
        planar(PlanarScheme::Euler),
        Component::N,
        planar_json.clone(),
    )?;
    let nsfd = SweepConfig {
        h_min: 0.1,
        h_max: 100.0,
        steps: 1000,
        ..euler
    };
    r.bifurcation(
        "fig4b",
        "NSFD predator-prey map",
        &nsfd,
        planar(PlanarScheme::Nsfd),
        Component::N,
        planar_json.clone(),
    )?;

    // fig5: time series below and above the Euler threshold
    let steps = 200;
    let mut failed = Vec::new();
    for (figure, scheme, h) in [
        ("fig5a", PlanarScheme::Nsfd, 2.0),
        ("fig5b", PlanarScheme::Euler, 2.0),
        ("fig5c", PlanarScheme::Nsfd, 2.67),
        ("fig5d", PlanarScheme::Euler, 2.67),
    ] {
        let map = PlanarMap::new(scheme, mp, h)?;
        let csv = format!("{figure}.csv");
        match iterate(&map, s0, steps) {
            Ok(traj) => with_file(&dir.join(&csv), |w| {
                output::write_trajectory(w, &traj, None)
            })?,
            Err(e) => {
                with_file(&dir.join(&csv), |w| {
                    output::write_trajectory(w, &e.partial, Some((e.index, &e.error)))
                })?;
                failed.push(format!("{figure}: {} at k={}", e.error, e.index));
            }
        }
        let name = match scheme {
            PlanarScheme::Nsfd => "NSFD",
            PlanarScheme::Euler => "Euler",
        };
        r.record(
            figure,
            &[&csv],
            json!({ "model": planar_json, "scheme": name, "h": h, "steps": steps }),
        );
        r.script(
            &format!("{figure}.gp"),
            output::time_series_script(
                &csv,
                &format!("{figure}.png"),
                &[Component::N, Component::P],
                &format!("{name}, h = {h}"),
            ),
        )?;
    }

    // stability reports at the default step
    for scheme in [Scheme::Nsfd, Scheme::EulerPredPrey] {
        let name = format!("stability_{}.json", scheme.name());
        let mut text = serde_json::to_string_pretty(&stability_json(scheme, &mp, 0.1)?)
            .map_err(|e| CliError::Io(e.into()))?;
        text.push('\n');
        std::fs::write(dir.join(&name), text)?;
        r.record(
            &name.replace(".json", ""),
            &[&name],
            json!({ "model": planar_json, "scheme": scheme.name(), "h": 0.1 }),
        );
    }

    let mut outputs = std::mem::take(&mut r.outputs);
    outputs.push("manifest.json".into());
    RunManifest::new(
        "repro",
        Value::Object(std::mem::take(&mut r.entries)),
        outputs,
    )
    .write(&dir.join("manifest.json"))?;
    writeln!(stdout, "{}", dir.display())?;
    if !failed.is_empty() {
        return Err(CliError::Numerical(failed.join("; ")));
    }
    Ok(())
}
