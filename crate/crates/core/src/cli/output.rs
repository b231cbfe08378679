//! CSV, manifest and gnuplot emission.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::bifurcation::BifurcationDataset;
use crate::error::Error;
use crate::schemes::{orbit, Component, DiscreteMap, OrbitFailure, Phase, Trajectory};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header<P: Phase>(w: &mut impl Write) -> io::Result<()> {
    write!(w, "k,t")?;
    for c in P::COMPONENTS {
        write!(w, ",{c}")?;
    }
    writeln!(w)
}

fn row<P: Phase>(w: &mut impl Write, k: usize, t: f64, x: &P) -> io::Result<()> {
    write!(w, "{k},{}", num(t))?;
    for i in 0..P::COMPONENTS.len() {
        write!(w, ",{}", num(x.component(i)))?;
    }
    writeln!(w)
}

/// The trailing diagnostic line for a failed orbit.
pub fn failure_comment(index: usize, error: &Error) -> String {
    match error {
        Error::NonFinite { .. } => format!("# nonfinite at k={index}"),
        _ => format!("# domain error at k={index}"),
    }
}

/// Streams the first `steps + 1` states of the orbit of `x0` as CSV.
/// On failure the rows produced so far are kept and a comment line is
/// appended; the failure is returned.
pub fn write_orbit<M: DiscreteMap>(
    w: &mut impl Write,
    map: &M,
    x0: M::Point,
    steps: usize,
) -> io::Result<Option<OrbitFailure>> {
    header::<M::Point>(w)?;
    let h = map.step_size();
    for (k, item) in orbit(map, x0).take(steps + 1).enumerate() {
        match item {
            Ok(x) => row(w, k, k as f64 * h, &x)?,
            Err(f) => {
                writeln!(w, "{}", failure_comment(f.index, &f.error))?;
                return Ok(Some(f));
            }
        }
    }
    Ok(None)
}

/// Writes a recorded trajectory, with an optional trailing failure line.
pub fn write_trajectory<P: Phase>(
    w: &mut impl Write,
    traj: &Trajectory<P>,
    failure: Option<(usize, &Error)>,
) -> io::Result<()> {
    header::<P>(w)?;
    for (k, t, x) in traj.iter() {
        row(w, k, t, &x)?;
    }
    if let Some((index, error)) = failure {
        writeln!(w, "{}", failure_comment(index, error))?;
    }
    Ok(())
}

/// `h,component,value,label`; a diverged step size gets one `h,-,,label` row.
pub fn write_bifurcation(w: &mut impl Write, data: &BifurcationDataset) -> io::Result<()> {
    writeln!(w, "h,component,value,label")?;
    for col in &data.columns {
        if col.components.iter().all(|(_, v)| v.is_empty()) {
            writeln!(w, "{},-,,{}", num(col.h), col.outcome)?;
            continue;
        }
        for (c, values) in &col.components {
            for v in values {
                writeln!(w, "{},{c},{},{}", num(col.h), num(*v), col.outcome)?;
            }
        }
    }
    Ok(())
}

/// Creates `path` and runs `body` on a buffered writer, flushing even when
/// `body` reports a numerical failure through its return value.
pub fn with_file<T>(
    path: &Path,
    body: impl FnOnce(&mut BufWriter<File>) -> io::Result<T>,
) -> io::Result<T> {
    let mut w = BufWriter::new(File::create(path)?);
    let out = body(&mut w)?;
    w.flush()?;
    Ok(out)
}

/// Metadata written next to every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub determinism: &'static str,
    pub version: &'static str,
    pub outputs: Vec<String>,
}

pub const DETERMINISM_NOTE: &str = "no random seeds; outputs are a pure function of the \
parameters and are byte-identical across runs and worker counts";

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, outputs: Vec<String>) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            determinism: DETERMINISM_NOTE,
            version: env!("CARGO_PKG_VERSION"),
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}

/// `<out>.manifest.json` next to `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn preamble(png: &str, title: &str, xlabel: &str, ylabel: &str) -> String {
    format!(
        "set terminal pngcairo size 1000,700\n\
         set output '{png}'\n\
         set datafile separator ','\n\
         set title '{title}'\n\
         set xlabel '{xlabel}'\n\
         set ylabel '{ylabel}'\n"
    )
}

/// Scatter of one component of a bifurcation CSV against `h`.
pub fn bifurcation_script(csv: &str, png: &str, component: Component, title: &str) -> String {
    format!(
        "{}plot '{csv}' every ::1 using 1:(strcol(2) eq '{component}' ? $3 : 1/0) \
         with dots lc rgb 'black' notitle\n",
        preamble(png, title, "h", &component.to_string())
    )
}

/// Every component of a `k,t,...` CSV against `t`.
pub fn time_series_script(csv: &str, png: &str, components: &[Component], title: &str) -> String {
    let plots: Vec<String> = components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            format!(
                "'{csv}' every ::1 using 2:{} with linespoints title '{c}'",
                i + 3
            )
        })
        .collect();
    format!(
        "{}plot {}\n",
        preamble(png, title, "t", "population"),
        plots.join(", \\\n     ")
    )
}

/// `N` against `P` for each `(csv, title)` trajectory.
pub fn phase_script(series: &[(&str, &str)], png: &str, title: &str) -> String {
    let plots: Vec<String> = series
        .iter()
        .map(|(csv, t)| format!("'{csv}' every ::1 using 3:4 with lines title '{t}'"))
        .collect();
    format!(
        "{}plot {}\n",
        preamble(png, title, "N", "P"),
        plots.join(", \\\n     ")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::Outcome;
    use crate::bifurcation::SweepColumn;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.1,
            1.0 / 3.0,
            41.0 / 71.0,
            1e-300,
            -2.5e17,
            f64::MIN_POSITIVE,
        ] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(
            manifest_path(Path::new("out/a.csv")),
            Path::new("out/a.csv.manifest.json")
        );
    }

    #[test]
    fn diverged_columns_get_a_placeholder_row() {
        let data = BifurcationDataset {
            columns: vec![
                SweepColumn {
                    h: 1.0,
                    outcome: Outcome::ConvergedToInterior,
                    components: vec![(Component::X, vec![50.0])],
                },
                SweepColumn {
                    h: 2.0,
                    outcome: Outcome::Diverged { step: 7 },
                    components: vec![(Component::X, vec![])],
                },
            ],
        };
        let mut buf = Vec::new();
        write_bifurcation(&mut buf, &data).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "h,component,value,label\n\
             1.0000000000000000e0,x,5.0000000000000000e1,ConvergedToInterior\n\
             2.0000000000000000e0,-,,Diverged@7\n"
        );
    }

    #[test]
    fn failed_trajectory_ends_with_comment() {
        let traj = Trajectory {
            t0: 0.0,
            h: 0.5,
            offset: 0,
            states: vec![1.0, 2.0],
        };
        let mut buf = Vec::new();
        write_trajectory(&mut buf, &traj, Some((2, &Error::NonFinite { index: 2 }))).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("k,t,x\n0,"));
        assert!(text.ends_with("\n# nonfinite at k=2\n"));
    }
}
