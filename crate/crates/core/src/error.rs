use thiserror::Error;

/// Malformed circuit or Pauli-list input. `line` is 1-based (0 when the
/// input was not line-oriented).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Errors raised by the simulators and compilers. Gate, operator and qudit
/// indices are stored 0-based and displayed 1-based.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("gates {} and {} do not commute", .0 + 1, .1 + 1)]
    NotCommuting(usize, usize),

    #[error("gate {} acts on {size} qudits, more than the locality bound {k}", .gate + 1)]
    LocalityExceeded { gate: usize, size: usize, k: usize },

    #[error("state needs {required} amplitudes but the cap is {cap}")]
    CapacityExceeded { required: u128, cap: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Pauli operators act on {0} and {1} qubits")]
    SizeMismatch(usize, usize),

    #[error("operator {} is not Hermitian", .0 + 1)]
    NotHermitian(usize),

    #[error("generator {} is a product of the other generators", .0 + 1)]
    DependentInput(usize),

    #[error("generators multiply to -I")]
    MinusIdentity,

    #[error("declared phase between gates {} and {} does not match", .0 + 1, .1 + 1)]
    PhaseMismatch(usize, usize),

    #[error("{found} non-commuting gates exceed the limit of {limit}")]
    TooManyExtras { found: usize, limit: usize },

    #[error("lightcone of qubit {} has {size} qubits, bound is {bound}", .qubit + 1)]
    LightconeTooLarge {
        qubit: usize,
        size: usize,
        bound: usize,
    },

    #[error("sampled a basis state with zero amplitude")]
    ZeroAmplitudeSample,

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
