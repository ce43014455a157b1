//! Circuit transformers built on the Hadamard test, and the constant-depth
//! overlap estimators that run them on a restricted commuting-circuit
//! device.
//!
//! Emitted test circuits have one extra qubit, the ancilla, placed first;
//! the input qubits move up by one.

mod executor;
mod hadamard;
mod overlap;

pub use executor::{exact_p0, DenseExecutor, GammaKExecutor, ShotTally};
pub use hadamard::{alternate_hadamard_test, hadamard_test, hadamard_test_unchecked, two_layer_merge, Part};
pub use overlap::{
    estimate_cd_clifford_overlap, estimate_cd_clifford_overlap_with_samples, estimate_cd_overlap,
    estimate_cd_overlap_with_samples, OverlapConfig, SubsetSample, DEFAULT_LIGHTCONE_BOUND,
};
