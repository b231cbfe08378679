use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "dyncons",
    version,
    about = "NSFD vs Euler discretizations of a ratio-dependent predator-prey model"
)]
pub struct Cli {
    /// JSON file with parameter values; command-line flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Iterate one discrete map and write the trajectory as CSV.
    Simulate(SimulateArgs),
    /// Print the stability report of the coexistence equilibrium as JSON.
    Stability(StabilityArgs),
    /// Sweep the step size and write a bifurcation dataset.
    Bifurcate(BifurcateArgs),
    /// Continuous reference vs NSFD vs Euler from the same initial state.
    Compare(CompareArgs),
    /// Regenerate every figure dataset into one directory.
    Repro(ReproArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Logistic growth rate.
    #[arg(long)]
    pub r: Option<f64>,
    /// Logistic carrying capacity.
    #[arg(long)]
    pub k: Option<f64>,
    /// Decay rate.
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// nsfd | euler | euler-logistic | euler-decay
    #[arg(long)]
    pub scheme: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StabilityArgs {
    /// nsfd | euler
    #[arg(long)]
    pub scheme: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct BifurcateArgs {
    #[arg(long)]
    pub scheme: Option<String>,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub h_min: Option<f64>,
    #[arg(long)]
    pub h_max: Option<f64>,
    /// Number of grid points.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub transient: Option<usize>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Label tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Start each h from the previous h's final state.
    #[arg(long)]
    pub warm_start: bool,
    #[arg(long, env = "DYNCONS_JOBS")]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a gnuplot script rendering the diagram (needs --out).
    #[arg(long)]
    pub plot_script: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub n0: Option<f64>,
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub rtol: Option<f64>,
    #[arg(long)]
    pub atol: Option<f64>,
    #[arg(long, default_value = "compare-out")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ReproArgs {
    /// Defaults to `repro-<unix time>`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, env = "DYNCONS_JOBS")]
    pub jobs: Option<usize>,
}

/// Every setting that may come from a `--config` file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub scheme: Option<String>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub r: Option<f64>,
    pub k: Option<f64>,
    pub lambda: Option<f64>,
    pub h: Option<f64>,
    pub n0: Option<f64>,
    pub p0: Option<f64>,
    pub x0: Option<f64>,
    pub steps: Option<usize>,
    pub h_min: Option<f64>,
    pub h_max: Option<f64>,
    pub grid: Option<usize>,
    pub transient: Option<usize>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub warm_start: Option<bool>,
    pub jobs: Option<usize>,
    pub t_end: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
}

macro_rules! overlay {
    ($hi:expr, $lo:expr; $($f:ident),* $(,)?) => {
        Settings { $($f: $hi.$f.or($lo.$f)),* }
    };
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    /// Values in `self` win; gaps are filled from `file`.
    pub fn over(self, file: Settings) -> Settings {
        overlay!(self, file;
            scheme, alpha, beta, delta, r, k, lambda, h, n0, p0, x0, steps,
            h_min, h_max, grid, transient, samples, tol, warm_start, jobs,
            t_end, rtol, atol)
    }

    fn with_model(m: &ModelArgs) -> Settings {
        Settings {
            alpha: m.alpha,
            beta: m.beta,
            delta: m.delta,
            r: m.r,
            k: m.k,
            lambda: m.lambda,
            ..Default::default()
        }
    }
}

impl From<&SimulateArgs> for Settings {
    fn from(a: &SimulateArgs) -> Self {
        Settings {
            scheme: a.scheme.clone(),
            h: a.h,
            n0: a.n0,
            p0: a.p0,
            x0: a.x0,
            steps: a.steps,
            ..Settings::with_model(&a.model)
        }
    }
}

impl From<&StabilityArgs> for Settings {
    fn from(a: &StabilityArgs) -> Self {
        Settings {
            scheme: a.scheme.clone(),
            h: a.h,
            ..Settings::with_model(&a.model)
        }
    }
}

impl From<&BifurcateArgs> for Settings {
    fn from(a: &BifurcateArgs) -> Self {
        Settings {
            scheme: a.scheme.clone(),
            n0: a.n0,
            p0: a.p0,
            x0: a.x0,
            h_min: a.h_min,
            h_max: a.h_max,
            grid: a.grid,
            transient: a.transient,
            samples: a.samples,
            tol: a.tol,
            warm_start: a.warm_start.then_some(true),
            jobs: a.jobs,
            ..Settings::with_model(&a.model)
        }
    }
}

impl From<&CompareArgs> for Settings {
    fn from(a: &CompareArgs) -> Self {
        Settings {
            h: a.h,
            n0: a.n0,
            p0: a.p0,
            t_end: a.t_end,
            tol: a.tol,
            rtol: a.rtol,
            atol: a.atol,
            ..Settings::with_model(&a.model)
        }
    }
}
