// Period doubling in the Euler logistic map `x + hrx(1 - x/K)`.
//
// The fixed point `K` loses stability at `h = 2/r`; past it the long-run
// orbit splits into 2, 4, ... distinct values.

use std::error::Error;

use dyncons::analysis::logistic_euler_threshold;
use dyncons::bifurcation::{sweep, SweepConfig, SweepModel};
use dyncons::schemes::{Component, ScalarScheme};
use dyncons::ScalarModelParams;

/// Returns the first grid step with more than one cluster.
pub fn run_example() -> Result<f64, Box<dyn Error>> {
    let params = ScalarModelParams::default();
    let cfg = SweepConfig {
        h_min: 0.1,
        h_max: 1.0,
        steps: 181,
        ..SweepConfig::default()
    };
    let model = SweepModel::Scalar {
        scheme: ScalarScheme::EulerLogistic,
        params,
        x0: 0.4,
    };
    let data = sweep(&cfg, &model)?;
    let counts = data.cluster_counts(Component::X, 1e-6);
    for (h, n) in counts.iter().step_by(10) {
        println!("h = {h:.3}  clusters = {n}");
    }
    let onset = counts
        .iter()
        .find(|(_, n)| *n > 1)
        .map(|(h, _)| *h)
        .ok_or("no period doubling on the grid")?;
    println!(
        "analytic threshold 2/r = {:.4}",
        logistic_euler_threshold(&params)
    );
    Ok(onset)
}

fn main() -> Result<(), Box<dyn Error>> {
    println!("first multi-valued step: {:.3}", run_example()?);
    Ok(())
}
