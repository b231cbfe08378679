// Prey bifurcation diagrams with the step size as parameter. The Euler
// map loses its stable equilibrium and starts oscillating; the NSFD map
// converges on the whole range.

use std::error::Error;

use dyncons::analysis::Outcome;
use dyncons::bifurcation::{sweep, SweepConfig, SweepModel};
use dyncons::schemes::PlanarScheme;
use dyncons::{ModelParams, State};

/// Returns the first Euler grid step not converging, and whether every NSFD
/// step converged.
pub fn run_example() -> Result<(f64, bool), Box<dyn Error>> {
    let model = |scheme| SweepModel::Planar {
        scheme,
        params: ModelParams::REFERENCE,
        s0: State::new(0.2, 0.2),
    };
    let euler_cfg = SweepConfig {
        h_min: 0.1,
        h_max: 3.0,
        steps: 291,
        ..SweepConfig::default()
    };
    let euler = sweep(&euler_cfg, &model(PlanarScheme::Euler))?;
    let onset = euler
        .columns
        .iter()
        .find(|c| c.outcome != Outcome::ConvergedToInterior)
        .ok_or("Euler converged everywhere")?;
    println!(
        "Euler: first non-converged step h = {:.2} ({})",
        onset.h, onset.outcome
    );

    let nsfd_cfg = SweepConfig {
        h_max: 100.0,
        steps: 200,
        ..euler_cfg
    };
    let nsfd = sweep(&nsfd_cfg, &model(PlanarScheme::Nsfd))?;
    let all = nsfd
        .columns
        .iter()
        .all(|c| c.outcome.is_converged_to_interior());
    println!(
        "NSFD: {} steps in [0.1, 100], all converged: {all}",
        nsfd.columns.len()
    );
    Ok((onset.h, all))
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()?;
    Ok(())
}
