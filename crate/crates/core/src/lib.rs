//! Classical simulation of commuting quantum circuits.

pub mod bits;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod local2;
pub mod oracle;
pub mod pauli;
pub mod paulisim;
pub mod stabilizer;
pub mod transformers;

pub use bits::BitString;
pub use circuit::{Circuit, CliffordGate, Gate};
pub use error::{Error, ParseError};
pub use pauli::PauliOperator;
