//! Simulation of controlled teleportation of arbitrary multi-qudit states
//! over d-dimensional GHZ channels.
//!
//! The library is organized around a dense complex state vector over a
//! register of labeled qudits ([`register`]), the generalized Bell / MUB
//! algebra ([`bases`]), projective measurement with Born-rule sampling and
//! exhaustive branch enumeration ([`measure`]), the end-to-end teleportation
//! protocol with correction computation and fidelity verification
//! ([`protocol`]), and the decoy-photon channel check with an
//! intercept-resend eavesdropper model ([`decoy`]).
//!
//! See the `examples/` directory for runnable walkthroughs of each
//! capability, and the `qudit-teleport` binary for the JSON-report CLI.

pub mod bases;
pub mod cli;
pub mod decoy;
pub mod error;
pub mod measure;
pub mod protocol;
pub mod register;
pub mod statespec;

pub use error::QuditError;
pub use register::{Dimension, ParticleLabel, ParticleRegistry, StateVector};
