//! One sampled controlled-teleportation run: a random 2-qutrit message is
//! teleported through two 4-particle GHZ channels (d=3, m=2, n=2).
//!
//! Run with: cargo run --example teleport_qutrit

use qudit_teleport::protocol::{random_message_state, run_sampled, ProtocolConfig};
use qudit_teleport::register::Dimension;

fn main() {
    let config = ProtocolConfig::new(Dimension::new(3).unwrap(), 2, 2).unwrap();
    let input = random_message_state(&config, 42).unwrap();

    println!("=== Controlled teleportation, d=3, m=2 message qutrits, n=2 controllers ===\n");
    println!("message amplitudes (first few):");
    for (i, a) in input.amplitudes().iter().take(4).enumerate() {
        println!("  a[{i}] = {:.4} + {:.4}i", a.re, a.im);
    }

    let report = run_sampled(&config, &input, 7).unwrap();
    let branch = &report.branches[0];

    println!("\nAlice's Bell outcomes (α_k1, α_k2):");
    for (k, a) in branch.alpha.iter().enumerate() {
        println!("  k={}: ({}, {})", k + 1, a[0], a[1]);
    }
    println!("controllers' X outcomes β_kj:");
    for (k, row) in branch.beta.iter().enumerate() {
        println!("  k={}: {row:?}", k + 1);
    }
    println!("receiver's corrections U_pq per particle:");
    for (k, (p, q)) in branch.p.iter().zip(&branch.q).enumerate() {
        println!("  k={}: U_{{{p},{q}}}", k + 1);
    }

    println!("\nfidelity with the original message: {:.12}", branch.fidelity.unwrap());
    println!("global-phase check: {}", if branch.phase_ok { "ok" } else { "MISMATCH" });
    println!("intrinsic efficiency η_q = {}", report.aggregate.eta_q);
}
