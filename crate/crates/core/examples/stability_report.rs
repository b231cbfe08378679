// Linear stability of the coexistence point under both maps: Jacobian,
// eigenvalues, Jury conditions and the Euler step-size bound.

use std::error::Error;

use dyncons::analysis::{
    classify, euler_critical_step, euler_jacobian_at_interior, euler_threshold,
    nsfd_jacobian_at_interior, Classification,
};
use dyncons::ModelParams;

/// Returns the Euler threshold and the exact critical step.
pub fn run_example() -> Result<(f64, f64), Box<dyn Error>> {
    let params = ModelParams::REFERENCE;
    let t = euler_threshold(&params)?;
    println!(
        "G = {:.4}, G/H = {:.4}, 2(1+ad)^2/G = {:.4}",
        t.g_euler, t.det_bound, t.flip_bound
    );
    let hc = euler_critical_step(&params)?.ok_or("Euler stable on the whole bracket")?;
    println!("Euler eigenvalues leave the unit disk at h = {hc:.6}");

    for h in [0.1, 2.0, 2.67, 100.0] {
        let nsfd = classify(&nsfd_jacobian_at_interior(&params, h)?);
        let euler = classify(&euler_jacobian_at_interior(&params, h)?);
        println!(
            "h = {h:>6}: NSFD {:?} (max |λ| {:.4}), Euler {:?} (max |λ| {:.4})",
            nsfd.classification,
            nsfd.max_modulus(),
            euler.classification,
            euler.max_modulus()
        );
        assert_eq!(nsfd.classification, Classification::Stable);
    }
    let report = classify(&euler_jacobian_at_interior(&params, 0.1)?);
    println!("{}", serde_json::to_string(&report)?);
    Ok((t.h_max, hc))
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()?;
    Ok(())
}
