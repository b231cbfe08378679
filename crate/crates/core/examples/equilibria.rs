// Equilibria of the ratio-dependent predator–prey system and the
// conditions for the coexistence point to exist and be stable.

use std::error::Error;

use dyncons::analysis::continuous_stability;
use dyncons::models::{interior_equilibrium, predator_free_equilibrium, rhs_predprey};
use dyncons::{ModelParams, State};

pub fn run_example() -> Result<State, Box<dyn Error>> {
    let params = ModelParams::REFERENCE;
    println!("predator-free: {:?}", predator_free_equilibrium().state);
    let e = interior_equilibrium(&params).ok_or("no coexistence equilibrium")?;
    let f = rhs_predprey(&params, e.state)?;
    println!(
        "coexistence:   ({:.4}, {:.4}), |f| = {:.1e}",
        e.state.n,
        e.state.p,
        f.n.hypot(f.p)
    );
    println!("{:?}", continuous_stability(&params));

    // delta too large: the coexistence point disappears
    let gone = ModelParams::new(0.1, 0.9, 5.0)?;
    println!(
        "delta = 5: {:?}",
        interior_equilibrium(&gone).map(|e| e.state)
    );
    Ok(e.state)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()?;
    Ok(())
}
