//! Stabilizer states, Clifford circuits and simultaneous diagonalization of
//! commuting Pauli operators.

mod clifford;
mod diagonalize;
pub(crate) mod gf2;
mod state;

pub use clifford::{CliffordCircuit, Direction};
pub use diagonalize::{complete_generators, diagonalize_commuting_set, synthesize_prep};
pub use state::StabilizerState;
