//! The algebra behind the protocol: the X_d basis is mutually unbiased to
//! Z_d, the d² generalized Bell states are orthonormal, and the Pauli U_uv
//! moves |ψ00⟩ to |ψ_uv⟩ when applied to the second qudit.
//!
//! Run with: cargo run --example bell_and_mub_algebra

use qudit_teleport::bases::{bell_state, generalized_pauli, x_basis_vector};
use qudit_teleport::register::{Dimension, ParticleLabel, StateVector};

fn main() {
    let d = 5usize;
    let dim = Dimension::new(d).unwrap();
    let x1 = ParticleLabel::message(1);
    let x2 = ParticleLabel::message(2);

    println!("=== d = {d} ===\n");

    println!("MUB overlaps |⟨k|u⟩_x|² (all should be 1/d = {:.3}):", 1.0 / d as f64);
    for k in 0..3 {
        let zk = StateVector::basis_state(dim, x1, k).unwrap();
        let row: Vec<String> = (0..d)
            .map(|u| {
                let xu = x_basis_vector(dim, u, x1).unwrap();
                format!("{:.3}", zk.fidelity(&xu).unwrap())
            })
            .collect();
        println!("  k={k}: {}", row.join("  "));
    }

    println!("\nBell basis Gram matrix (u,v) block, first 5 states:");
    let states: Vec<StateVector> = (0..d * d)
        .map(|i| bell_state(dim, i / d, i % d, (x1, x2)).unwrap())
        .collect();
    for a in states.iter().take(5) {
        let row: Vec<String> = states
            .iter()
            .take(5)
            .map(|b| format!("{:.2}", a.inner_product(b).unwrap().norm()))
            .collect();
        println!("  {}", row.join("  "));
    }

    println!("\n(I ⊗ U_uv)|ψ00⟩ = |ψ_uv⟩ check over all (u,v):");
    let psi00 = bell_state(dim, 0, 0, (x1, x2)).unwrap();
    let mut worst: f64 = 0.0;
    for u in 0..d {
        for v in 0..d {
            let pauli = generalized_pauli(dim, u, v).unwrap();
            let moved = psi00.apply_single_qudit_unitary(x2, pauli.matrix()).unwrap();
            let target = bell_state(dim, u, v, (x1, x2)).unwrap();
            let dev: f64 = moved
                .amplitudes()
                .iter()
                .zip(target.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            worst = worst.max(dev);
        }
    }
    println!("  max entrywise deviation: {worst:.3e}");
}
