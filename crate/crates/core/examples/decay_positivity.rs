// Forward Euler on `x' = -λx` stays positive only for `h < 1/λ`; beyond
// that the iterates change sign, which the exact solution never does.

use std::error::Error;

use dyncons::schemes::{iterate, ScalarMap};
use dyncons::ScalarModelParams;

/// Returns `(h, smallest iterate)` for a few step sizes.
pub fn run_example() -> Result<Vec<(f64, f64)>, Box<dyn Error>> {
    let params = ScalarModelParams::default(); // λ = 1
    let mut out = Vec::new();
    for h in [0.5, 0.9, 1.5, 2.5] {
        let traj = iterate(&ScalarMap::decay(params, h)?, 1.0, 20)?;
        let min = traj.states.iter().copied().fold(f64::INFINITY, f64::min);
        println!("h = {h}: x_1 = {:+.3}, min = {min:+.3e}", traj.states[1]);
        out.push((h, min));
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()?;
    Ok(())
}
