// Continuous logistic growth `x' = rx(1 - x/K)` integrated with the
// adaptive Dormand–Prince solver. Even a small start is attracted to `K`.
//
// ```text
// cargo run --example logistic_growth
// ```

use std::error::Error;

use dyncons::schemes::{integrate_logistic, DormandPrince};
use dyncons::ScalarModelParams;

pub fn run_example() -> Result<f64, Box<dyn Error>> {
    let sp = ScalarModelParams::default(); // r = 3, K = 50
    let traj = integrate_logistic(&sp, 0.4, 0.5, 10, &DormandPrince::default())?;
    for (_, t, x) in traj.iter() {
        println!("t = {t:>4.1}  x = {x:>10.6}");
    }
    Ok(traj.last().unwrap_or(f64::NAN))
}

fn main() -> Result<(), Box<dyn Error>> {
    let x = run_example()?;
    println!("x(5) = {x:.8}, carrying capacity 50");
    Ok(())
}
