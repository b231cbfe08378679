// The continuous system, the NSFD map and the Euler map from the same
// start, sampled on a common time grid.

use std::error::Error;

use dyncons::models::require_interior;
use dyncons::schemes::{integrate_continuous_on_grid, iterate, DormandPrince, PlanarMap};
use dyncons::{ModelParams, State};

/// Terminal distances to the coexistence point: continuous, NSFD, Euler.
pub fn run_example() -> Result<[f64; 3], Box<dyn Error>> {
    let params = ModelParams::REFERENCE;
    let e = require_interior(&params)?;
    let (s0, h, steps) = (State::new(0.2, 0.2), 0.1, 5000);

    let ode = integrate_continuous_on_grid(&params, s0, h, steps, &DormandPrince::default())?;
    let nsfd = iterate(&PlanarMap::nsfd(params, h)?, s0, steps)?;
    let euler = iterate(&PlanarMap::euler(params, h)?, s0, steps)?;

    for k in (0..=steps).step_by(500) {
        let (a, b, c) = (ode.states[k], nsfd.states[k], euler.states[k]);
        println!(
            "t = {:>5.1}  ode ({:.4}, {:.4})  nsfd ({:.4}, {:.4})  euler ({:.4}, {:.4})",
            ode.time(k),
            a.n,
            a.p,
            b.n,
            b.p,
            c.n,
            c.p
        );
    }
    let d = |t: &dyncons::schemes::Trajectory<State>| t.last().map_or(f64::NAN, |s| s.distance(&e));
    Ok([d(&ode), d(&nsfd), d(&euler)])
}

fn main() -> Result<(), Box<dyn Error>> {
    let [a, b, c] = run_example()?;
    println!("terminal distances: {a:.2e} {b:.2e} {c:.2e}");
    Ok(())
}
