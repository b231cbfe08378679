// Cross-checks the closed-form Jacobian of the NSFD map against central
// differences, and the explicit map against its implicit form.

use std::error::Error;

use dyncons::analysis::nsfd_jacobian_at_interior;
use dyncons::models::require_interior;
use dyncons::oracle::{fd_jacobian, implicit_residual, DEFAULT_FD_EPS};
use dyncons::schemes::nsfd_step;
use dyncons::{ModelParams, State};

/// Largest relative entry error and largest implicit residual seen.
pub fn run_example() -> Result<(f64, f64), Box<dyn Error>> {
    let params = ModelParams::REFERENCE;
    let e = require_interior(&params)?;
    let mut worst = 0.0_f64;
    for h in [0.1, 2.0, 10.0] {
        let exact = nsfd_jacobian_at_interior(&params, h)?;
        let fd = fd_jacobian(|s| nsfd_step(&params, h, s), e, DEFAULT_FD_EPS)?;
        let scale = exact.entries().iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        for (a, b) in exact.entries().iter().zip(fd.entries()) {
            worst = worst.max((a - b).abs() / scale);
        }
        println!(
            "h = {h:>4}: exact {:?}\n          fd    {:?}",
            exact.entries(),
            fd.entries()
        );
    }

    let mut residual = 0.0_f64;
    let mut s = State::new(0.2, 0.2);
    for _ in 0..50 {
        let next = nsfd_step(&params, 0.5, s)?;
        let (r1, r2) = implicit_residual(&params, 0.5, s, next);
        residual = residual.max(r1.abs()).max(r2.abs());
        s = next;
    }
    println!("max relative Jacobian error {worst:.2e}, max implicit residual {residual:.2e}");
    Ok((worst, residual))
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()?;
    Ok(())
}
