// NSFD and Euler orbits below and above the Euler stability threshold.
// At `h = 2` both settle on the coexistence point; at `h = 2.67` only the
// NSFD map does, while Euler oscillates.

use std::error::Error;

use dyncons::analysis::{simulation_stability_oracle, Outcome};
use dyncons::schemes::{iterate, PlanarMap, PlanarScheme};
use dyncons::{ModelParams, State};

type Labelled = (PlanarScheme, f64, Outcome);

pub fn run_example() -> Result<Vec<Labelled>, Box<dyn Error>> {
    let s0 = State::new(0.2, 0.2);
    let mut out = Vec::new();
    for h in [2.0, 2.67] {
        for scheme in [PlanarScheme::Nsfd, PlanarScheme::Euler] {
            let map = PlanarMap::new(scheme, ModelParams::REFERENCE, h)?;
            let tail: Vec<String> = iterate(&map, s0, 40)?
                .tail(4)
                .iter()
                .map(|s| format!("({:.4}, {:.4})", s.n, s.p))
                .collect();
            let label = simulation_stability_oracle(&map, s0, 10_000, 128, 1e-6);
            println!(
                "{scheme:?} h = {h}: {label}, k = 37..40: {}",
                tail.join(" ")
            );
            out.push((scheme, h, label));
        }
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()?;
    Ok(())
}
