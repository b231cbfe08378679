//! One-step discrete maps and their iteration.
//!
//! Two discretizations of the predator–prey model are provided:
//!
//! * the nonstandard finite-difference (NSFD) map, built from nonlocal
//!   approximations with denominator function `φ(h) = h`:
//!
//!   ```text
//!   N' = N{1 + h + h(N + αP)}(N + αP) / [(1 + 2hN + αhP)(N + αP) + hP]
//!   P' = PN(1 + βδh) / (N + βhP)
//!   ```
//!
//!   Every term is nonnegative, so positive data stay positive for any `h`.
//!
//! * the forward Euler map `N' = N + hN[1 - N - P/(N+αP)]`,
//!   `P' = P + hβP[δ - P/N]`, which is not unconditionally positive.
//!
//!   The predator equation uses `P/N`. The intermediate difference form
//!   that is sometimes printed with `P/P` in that slot is a typo; with
//!   `P/P` the Euler map would not share the ODE's equilibria.
//!
//! The scalar Euler maps for logistic growth and linear decay are included
//! as the textbook examples of step-size dependent behaviour.

mod dopri;
mod trajectory;

pub use dopri::{
    integrate_continuous, integrate_continuous_on_grid, integrate_logistic, DormandPrince,
};
use trajectory::Recorder;
pub use trajectory::{IterateError, Trajectory};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{interior_equilibrium, ModelParams, ScalarModelParams, State};

/// Default number of states [`iterate`] keeps in memory.
pub const DEFAULT_TRAJECTORY_CAP: usize = 1_000_000;

fn check_prey(s: State) -> Result<()> {
    if s.n > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "prey density must be positive, got N = {}",
            s.n
        )))
    }
}

/// One step of the NSFD map.
pub fn nsfd_step(params: &ModelParams, h: f64, s: State) -> Result<State> {
    check_prey(s)?;
    let ModelParams { alpha, beta, delta } = *params;
    let (n, p) = (s.n, s.p);
    let b = n + alpha * p;
    // N and P multiply O(1) ratios, so tiny states do not underflow in
    // intermediate products; at (1, 0) the prey ratio is exactly 1
    let growth = (1.0 + h * (1.0 + b)) * b / ((1.0 + h * (2.0 * n + alpha * p)) * b + h * p);
    let damping = n * (1.0 + beta * delta * h) / (n + beta * h * p);
    Ok(State {
        n: n * growth,
        p: p * damping,
    })
}

/// One step of the forward Euler predator–prey map.
pub fn euler_predprey_step(params: &ModelParams, h: f64, s: State) -> Result<State> {
    check_prey(s)?;
    let ModelParams { alpha, beta, delta } = *params;
    let (n, p) = (s.n, s.p);
    let b = n + alpha * p;
    if b == 0.0 {
        return Err(Error::Domain("N + alpha*P vanishes".into()));
    }
    Ok(State {
        n: n + h * n * (1.0 - n - p / b),
        p: p + h * beta * p * (delta - p / n),
    })
}

/// `x + hrx(1 - x/K)`
pub fn euler_logistic_step(sp: &ScalarModelParams, h: f64, x: f64) -> f64 {
    x + h * sp.r * x * (1.0 - x / sp.k)
}

/// `(1 - λh)x`; changes sign once `λh > 1`.
pub fn euler_decay_step(sp: &ScalarModelParams, h: f64, x: f64) -> f64 {
    (1.0 - sp.lambda * h) * x
}

/// Named state components, used for tabular output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Component {
    N,
    P,
    X,
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Component::N => "N",
            Component::P => "P",
            Component::X => "x",
        })
    }
}

/// A point in the phase space of a discrete map.
pub trait Phase: Copy + fmt::Debug + Send + Sync {
    const COMPONENTS: &'static [Component];

    fn component(&self, i: usize) -> f64;

    fn is_finite(&self) -> bool {
        (0..Self::COMPONENTS.len()).all(|i| self.component(i).is_finite())
    }

    /// Euclidean distance.
    fn distance(&self, other: &Self) -> f64 {
        (0..Self::COMPONENTS.len())
            .map(|i| {
                let d = self.component(i) - other.component(i);
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }
}

impl Phase for State {
    const COMPONENTS: &'static [Component] = &[Component::N, Component::P];

    fn component(&self, i: usize) -> f64 {
        match i {
            0 => self.n,
            1 => self.p,
            _ => panic!("State has two components, asked for {i}"),
        }
    }
}

impl Phase for f64 {
    const COMPONENTS: &'static [Component] = &[Component::X];

    fn component(&self, i: usize) -> f64 {
        assert_eq!(i, 0, "scalar state has one component");
        *self
    }
}

/// A one-step map `x_{k+1} = F(x_k)` with a fixed step size.
pub trait DiscreteMap: Sync {
    type Point: Phase;

    fn step_size(&self) -> f64;

    fn step(&self, x: Self::Point) -> Result<Self::Point>;

    /// The fixed point whose attraction the stability oracle tests for:
    /// the coexistence equilibrium for predator–prey maps, `K` for the
    /// logistic map and `0` for the decay map.
    fn target(&self) -> Option<Self::Point>;
}

/// The four discretizations, by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Nsfd,
    EulerPredPrey,
    EulerLogistic,
    EulerDecay,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Nsfd => "nsfd",
            Scheme::EulerPredPrey => "euler",
            Scheme::EulerLogistic => "euler-logistic",
            Scheme::EulerDecay => "euler-decay",
        }
    }

    pub fn is_planar(self) -> bool {
        matches!(self, Scheme::Nsfd | Scheme::EulerPredPrey)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nsfd" => Ok(Scheme::Nsfd),
            "euler" | "euler-predprey" => Ok(Scheme::EulerPredPrey),
            "euler-logistic" | "logistic" => Ok(Scheme::EulerLogistic),
            "euler-decay" | "decay" => Ok(Scheme::EulerDecay),
            other => Err(Error::invalid(format!("unknown scheme '{other}'"))),
        }
    }
}

fn check_step_size(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "step size must be positive, got {h}"
        )))
    }
}

/// Discretizations of the predator–prey model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlanarScheme {
    Nsfd,
    Euler,
}

/// A predator–prey map (NSFD or Euler) with its parameters and step size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarMap {
    scheme: PlanarScheme,
    params: ModelParams,
    h: f64,
}

impl PlanarMap {
    pub fn new(scheme: PlanarScheme, params: ModelParams, h: f64) -> Result<Self> {
        check_step_size(h)?;
        Ok(PlanarMap { scheme, params, h })
    }

    pub fn nsfd(params: ModelParams, h: f64) -> Result<Self> {
        Self::new(PlanarScheme::Nsfd, params, h)
    }

    pub fn euler(params: ModelParams, h: f64) -> Result<Self> {
        Self::new(PlanarScheme::Euler, params, h)
    }

    pub fn scheme(&self) -> PlanarScheme {
        self.scheme
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }
}

impl DiscreteMap for PlanarMap {
    type Point = State;

    fn step_size(&self) -> f64 {
        self.h
    }

    fn step(&self, s: State) -> Result<State> {
        match self.scheme {
            PlanarScheme::Nsfd => nsfd_step(&self.params, self.h, s),
            PlanarScheme::Euler => euler_predprey_step(&self.params, self.h, s),
        }
    }

    fn target(&self) -> Option<State> {
        interior_equilibrium(&self.params).map(|e| e.state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarScheme {
    EulerLogistic,
    EulerDecay,
}

/// The Euler logistic or Euler decay map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarMap {
    scheme: ScalarScheme,
    params: ScalarModelParams,
    h: f64,
}

impl ScalarMap {
    pub fn new(scheme: ScalarScheme, params: ScalarModelParams, h: f64) -> Result<Self> {
        check_step_size(h)?;
        Ok(ScalarMap { scheme, params, h })
    }

    pub fn logistic(params: ScalarModelParams, h: f64) -> Result<Self> {
        Self::new(ScalarScheme::EulerLogistic, params, h)
    }

    pub fn decay(params: ScalarModelParams, h: f64) -> Result<Self> {
        Self::new(ScalarScheme::EulerDecay, params, h)
    }

    pub fn scheme(&self) -> ScalarScheme {
        self.scheme
    }
}

impl DiscreteMap for ScalarMap {
    type Point = f64;

    fn step_size(&self) -> f64 {
        self.h
    }

    fn step(&self, x: f64) -> Result<f64> {
        Ok(match self.scheme {
            ScalarScheme::EulerLogistic => euler_logistic_step(&self.params, self.h, x),
            ScalarScheme::EulerDecay => euler_decay_step(&self.params, self.h, x),
        })
    }

    fn target(&self) -> Option<f64> {
        Some(match self.scheme {
            ScalarScheme::EulerLogistic => self.params.k,
            ScalarScheme::EulerDecay => 0.0,
        })
    }
}

/// Streaming orbit of a map: yields `x_0, x_1, ...` and stops after the
/// first failure, which is reported with the index of the state that could
/// not be produced.
pub struct Orbit<'a, M: DiscreteMap> {
    map: &'a M,
    state: OrbitState<M::Point>,
    index: usize,
}

enum OrbitState<P> {
    Pending(P),
    Failed(OrbitFailure),
    Done,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitFailure {
    pub index: usize,
    pub error: Error,
}

pub fn orbit<M: DiscreteMap>(map: &M, x0: M::Point) -> Orbit<'_, M> {
    Orbit {
        map,
        state: OrbitState::Pending(x0),
        index: 0,
    }
}

impl<M: DiscreteMap> Iterator for Orbit<'_, M> {
    type Item = std::result::Result<M::Point, OrbitFailure>;

    fn next(&mut self) -> Option<Self::Item> {
        match std::mem::replace(&mut self.state, OrbitState::Done) {
            OrbitState::Done => None,
            OrbitState::Failed(f) => Some(Err(f)),
            OrbitState::Pending(x) => {
                let index = self.index;
                if !x.is_finite() {
                    return Some(Err(OrbitFailure {
                        index,
                        error: Error::NonFinite { index },
                    }));
                }
                self.state = match self.map.step(x) {
                    Ok(y) => OrbitState::Pending(y),
                    Err(error) => OrbitState::Failed(OrbitFailure {
                        index: index + 1,
                        error,
                    }),
                };
                self.index += 1;
                Some(Ok(x))
            }
        }
    }
}

/// Iterates `steps` times from `x0`, keeping at most
/// [`DEFAULT_TRAJECTORY_CAP`] of the most recent states.
pub fn iterate<M: DiscreteMap>(
    map: &M,
    x0: M::Point,
    steps: usize,
) -> std::result::Result<Trajectory<M::Point>, IterateError<M::Point>> {
    iterate_capped(map, x0, steps, DEFAULT_TRAJECTORY_CAP)
}

/// As [`iterate`], keeping the last `cap` states (`cap >= 1`).
pub fn iterate_capped<M: DiscreteMap>(
    map: &M,
    x0: M::Point,
    steps: usize,
    cap: usize,
) -> std::result::Result<Trajectory<M::Point>, IterateError<M::Point>> {
    let mut traj = Recorder::new(0.0, map.step_size(), cap.max(1), steps + 1);
    for item in orbit(map, x0).take(steps + 1) {
        match item {
            Ok(x) => traj.push(x),
            Err(OrbitFailure { index, error }) => {
                return Err(IterateError {
                    index,
                    error,
                    partial: traj.finish(),
                })
            }
        }
    }
    Ok(traj.finish())
}
