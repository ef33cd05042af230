//! GHZ correlations: measuring one party of (1/√d) Σ_l |l,l,...,l⟩ in Z
//! pins every other party to the same digit, while X-basis measurements
//! give uniform outcomes.
//!
//! Run with: cargo run --example ghz_collapse

use qudit_teleport::bases::{ghz_state, BasisChoice};
use qudit_teleport::measure::{enumerate_branches, PlanStep};
use qudit_teleport::register::{Dimension, ParticleLabel};

fn main() {
    let d = Dimension::new(3).unwrap();
    let labels: Vec<ParticleLabel> = (1..=4).map(ParticleLabel::message).collect();
    let ghz = ghz_state(d, labels.clone()).unwrap();
    println!("4-party qutrit GHZ state, {} amplitudes\n", ghz.amplitudes().len());

    println!("Z measurement on party 1:");
    let plan = [PlanStep::Single { label: labels[0], basis: BasisChoice::Z }];
    for b in enumerate_branches(&ghz, &plan).unwrap() {
        let state = b.state.unwrap();
        let nonzero: Vec<usize> = state
            .amplitudes()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 1e-12)
            .map(|(i, _)| i)
            .collect();
        println!(
            "  outcome {:?}  p={:.4}  surviving basis indices of the other 3 parties: {:?}",
            b.outcomes[0], b.probability, nonzero
        );
    }

    println!("\nX measurement on party 1 (outcomes uniform, remainder stays entangled):");
    let plan = [PlanStep::Single { label: labels[0], basis: BasisChoice::X }];
    for b in enumerate_branches(&ghz, &plan).unwrap() {
        let state = b.state.unwrap();
        let support = state.amplitudes().iter().filter(|a| a.norm() > 1e-12).count();
        println!(
            "  outcome {:?}  p={:.4}  residual support size {support}",
            b.outcomes[0], b.probability
        );
    }
}
