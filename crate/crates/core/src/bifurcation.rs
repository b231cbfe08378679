//! Step-size bifurcation sweeps.
//!
//! For each `h` on an equally spaced grid the map is iterated from the
//! initial state past a transient, a window of iterates is recorded, and the
//! window is labelled by [`observe`]. Rows are independent, so they are
//! fanned out over a thread pool and merged back in grid order; the result
//! does not depend on the number of workers.

use rayon::prelude::*;

use crate::analysis::{observe, Outcome};
use crate::error::{Error, Result};
use crate::models::{ModelParams, ScalarModelParams, State};
use crate::schemes::{
    Component, DiscreteMap, Phase, PlanarMap, PlanarScheme, ScalarMap, ScalarScheme,
};

pub const DEFAULT_TRANSIENT: usize = 2000;
pub const DEFAULT_SAMPLES: usize = 128;
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub h_min: f64,
    pub h_max: f64,
    /// Number of grid points, including both ends.
    pub steps: usize,
    pub transient: usize,
    pub samples: usize,
    /// Tolerance used for the outcome label.
    pub tol: f64,
    /// Start each `h` from the final state of the previous one. Forces a
    /// sequential sweep.
    pub warm_start: bool,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            h_min: 0.1,
            h_max: 1.0,
            steps: 100,
            transient: DEFAULT_TRANSIENT,
            samples: DEFAULT_SAMPLES,
            tol: DEFAULT_CLUSTER_TOL,
            warm_start: false,
            jobs: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h_min > 0.0 && self.h_min < self.h_max && self.h_max.is_finite()) {
            return Err(Error::invalid(format!(
                "need 0 < h_min < h_max, got h_min = {}, h_max = {}",
                self.h_min, self.h_max
            )));
        }
        if self.steps < 2 {
            return Err(Error::invalid(format!(
                "grid needs at least 2 points, got {}",
                self.steps
            )));
        }
        if self.samples < 1 {
            return Err(Error::invalid("samples must be at least 1"));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.jobs == Some(0) {
            return Err(Error::invalid("jobs must be at least 1"));
        }
        Ok(())
    }

    /// The step sizes of the sweep, `h_min` to `h_max` inclusive.
    pub fn grid(&self) -> Vec<f64> {
        let span = self.h_max - self.h_min;
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.h_max
                } else {
                    self.h_min + span * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// What to sweep: a map family and its initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepModel {
    Planar {
        scheme: PlanarScheme,
        params: ModelParams,
        s0: State,
    },
    Scalar {
        scheme: ScalarScheme,
        params: ScalarModelParams,
        x0: f64,
    },
}

/// Recorded samples and label for one step size.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepColumn {
    pub h: f64,
    pub outcome: Outcome,
    /// Window values per tracked component; empty when diverged.
    pub components: Vec<(Component, Vec<f64>)>,
}

impl SweepColumn {
    pub fn values(&self, c: Component) -> &[f64] {
        self.components
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, v)| v.as_slice())
            .unwrap_or(&[])
    }
}

/// One `(h, component, value, label)` record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub h: f64,
    pub component: Component,
    pub value: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationDataset {
    /// Ascending in `h`.
    pub columns: Vec<SweepColumn>,
}

impl BifurcationDataset {
    pub fn rows(&self) -> impl Iterator<Item = Row> + '_ {
        self.columns.iter().flat_map(|col| {
            col.components.iter().flat_map(move |(component, values)| {
                values.iter().map(move |&value| Row {
                    h: col.h,
                    component: *component,
                    value,
                    outcome: col.outcome,
                })
            })
        })
    }

    /// Number of distinct values of `component` at each `h`.
    pub fn cluster_counts(&self, component: Component, tol: f64) -> Vec<(f64, usize)> {
        self.columns
            .iter()
            .map(|c| (c.h, cluster_count(c.values(component), tol)))
            .collect()
    }
}

/// Number of clusters under single linkage with threshold `tol`. In one
/// dimension this is one plus the number of sorted gaps wider than `tol`.
pub fn cluster_count(values: &[f64], tol: f64) -> usize {
    if values.is_empty() {
        return 0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    1 + sorted.windows(2).filter(|w| w[1] - w[0] > tol).count()
}

fn column<M: DiscreteMap>(
    map: &M,
    x0: M::Point,
    cfg: &SweepConfig,
) -> (SweepColumn, Option<M::Point>) {
    let obs = observe(map, x0, cfg.transient, cfg.samples, cfg.tol);
    let components = M::Point::COMPONENTS
        .iter()
        .enumerate()
        .filter(|_| !obs.window.is_empty())
        .map(|(i, &c)| (c, obs.window.iter().map(|x| x.component(i)).collect()))
        .collect();
    (
        SweepColumn {
            h: map.step_size(),
            outcome: obs.outcome,
            components,
        },
        obs.window.last().copied(),
    )
}

fn run<M, F>(cfg: &SweepConfig, x0: M::Point, make: F) -> Result<BifurcationDataset>
where
    M: DiscreteMap,
    F: Fn(f64) -> Result<M> + Sync,
{
    cfg.validate()?;
    let grid = cfg.grid();
    let maps = grid.iter().map(|&h| make(h)).collect::<Result<Vec<_>>>()?;

    let columns = if cfg.warm_start {
        let mut start = x0;
        maps.iter()
            .map(|m| {
                let (col, last) = column(m, start, cfg);
                start = last.unwrap_or(x0);
                col
            })
            .collect()
    } else if cfg.jobs == Some(1) {
        maps.iter().map(|m| column(m, x0, cfg).0).collect()
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cfg.jobs {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
        // indexed collect keeps grid order
        pool.install(|| maps.par_iter().map(|m| column(m, x0, cfg).0).collect())
    };
    Ok(BifurcationDataset { columns })
}

/// Runs the sweep described by `config` over `model`.
pub fn sweep(config: &SweepConfig, model: &SweepModel) -> Result<BifurcationDataset> {
    match *model {
        SweepModel::Planar { scheme, params, s0 } => {
            run(config, s0, |h| PlanarMap::new(scheme, params, h))
        }
        SweepModel::Scalar { scheme, params, x0 } => {
            run(config, x0, |h| ScalarMap::new(scheme, params, h))
        }
    }
}
