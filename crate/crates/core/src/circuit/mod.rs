//! Circuit intermediate representation.
//!
//! A [`Circuit`] is an ordered list of [`Gate`]s on `n` qudits of dimension
//! `d` (the first gate acts first). Optional layer separators record the
//! declared depth structure. Circuits are validated on construction;
//! commutativity is a separate, checkable property.

mod commute;
mod gate;
mod lightcone;
mod parse;
mod standard_form;

use std::fmt;
use std::str::FromStr;

pub use commute::{commutator_norm, commutator_probe, is_commuting_pair, COMMUTE_TOL};
pub use gate::{CliffordGate, Gate};
pub use lightcone::{lightcone_gates, support_lightcone};
pub use parse::parse_circuit;
pub use standard_form::{standard_form, standard_form_unchecked};

use crate::error::{Error, ParseError};
use crate::linalg::{self, unitarity_defect};

/// Frobenius tolerance used for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    d: usize,
    gates: Vec<Gate>,
    /// Gate counts at which a layer separator was declared.
    layer_breaks: Vec<usize>,
}

impl Circuit {
    pub fn new(n: usize, d: usize) -> Result<Circuit, Error> {
        if d < 2 {
            return Err(Error::InvalidCircuit(format!("local dimension {d} < 2")));
        }
        Ok(Circuit {
            n,
            d,
            gates: Vec::new(),
            layer_breaks: Vec::new(),
        })
    }

    /// An `n`-qubit circuit.
    pub fn qubits(n: usize) -> Circuit {
        Circuit::new(n, 2).expect("d = 2 is valid")
    }

    pub fn from_gates<I: IntoIterator<Item = Gate>>(n: usize, d: usize, gates: I) -> Result<Circuit, Error> {
        let mut c = Circuit::new(n, d)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    #[inline]
    pub fn num_qudits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn layer_breaks(&self) -> &[usize] {
        &self.layer_breaks
    }

    /// Appends a gate after validating it against the register.
    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, Error> {
        self.validate_gate(&gate)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub(crate) fn push_unchecked(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Starts a new depth layer.
    pub fn push_layer_break(&mut self) -> &mut Self {
        self.layer_breaks.push(self.gates.len());
        self
    }

    /// Gates grouped by declared layer. Without separators everything is a
    /// single layer; an empty circuit has no layers.
    pub fn layers(&self) -> Vec<&[Gate]> {
        let mut out = Vec::new();
        let mut start = 0;
        for &b in &self.layer_breaks {
            out.push(&self.gates[start..b]);
            start = b;
        }
        out.push(&self.gates[start..]);
        out.retain(|l| !l.is_empty());
        out
    }

    /// Number of non-empty declared layers.
    pub fn depth(&self) -> usize {
        self.layers().len()
    }

    /// Largest gate support.
    pub fn locality(&self) -> usize {
        self.gates.iter().map(|g| g.locality()).max().unwrap_or(0)
    }

    /// `U†`: reversed gate order, each gate inverted. Layer structure is
    /// mirrored.
    pub fn inverse(&self) -> Circuit {
        let m = self.gates.len();
        let mut breaks: Vec<usize> = self.layer_breaks.iter().map(|b| m - b).collect();
        breaks.reverse();
        Circuit {
            n: self.n,
            d: self.d,
            gates: self.gates.iter().rev().map(|g| g.inverse()).collect(),
            layer_breaks: breaks,
        }
    }

    /// Checks every gate pair; returns the first offending pair.
    pub fn check_commuting(&self) -> Result<(), Error> {
        for i in 0..self.gates.len() {
            for j in i + 1..self.gates.len() {
                if !is_commuting_pair(&self.gates[i], &self.gates[j], self.d) {
                    return Err(Error::NotCommuting(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn is_commuting(&self) -> bool {
        self.check_commuting().is_ok()
    }

    pub fn check_locality(&self, k: usize) -> Result<(), Error> {
        for (i, g) in self.gates.iter().enumerate() {
            if g.locality() > k {
                return Err(Error::LocalityExceeded {
                    gate: i,
                    size: g.locality(),
                    k,
                });
            }
        }
        Ok(())
    }

    fn validate_gate(&self, gate: &Gate) -> Result<(), Error> {
        let wires = gate.wires();
        for &q in &wires {
            if q >= self.n {
                return Err(Error::InvalidCircuit(format!(
                    "qudit {} out of range 1..={}",
                    q + 1,
                    self.n
                )));
            }
        }
        let mut sorted = wires.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != wires.len() {
            return Err(Error::InvalidCircuit("gate acts twice on the same qudit".into()));
        }
        if gate.requires_qubits() && self.d != 2 {
            return Err(Error::InvalidCircuit(format!(
                "{} gates are only defined for d = 2, register has d = {}",
                gate_kind(gate),
                self.d
            )));
        }
        self.validate_kind(gate)
    }

    fn validate_kind(&self, gate: &Gate) -> Result<(), Error> {
        match gate {
            Gate::Clifford(_) => Ok(()),
            Gate::Dense { qudits, matrix } => {
                let dim = linalg::pow_usize(self.d, qudits.len())
                    .ok_or_else(|| Error::InvalidCircuit("dense gate too large".into()))?;
                if matrix.nrows() != dim || matrix.ncols() != dim {
                    return Err(Error::InvalidCircuit(format!(
                        "dense gate on {} qudits needs a {dim}x{dim} matrix, got {}x{}",
                        qudits.len(),
                        matrix.nrows(),
                        matrix.ncols()
                    )));
                }
                let defect = unitarity_defect(matrix);
                if defect > UNITARY_TOL {
                    return Err(Error::InvalidCircuit(format!(
                        "dense gate is not unitary (defect {defect:.3e})"
                    )));
                }
                Ok(())
            }
            Gate::PauliExp { pauli, .. } => {
                if pauli.num_qubits() != self.n {
                    return Err(Error::InvalidCircuit(format!(
                        "Pauli string has {} qubits, register has {}",
                        pauli.num_qubits(),
                        self.n
                    )));
                }
                if !pauli.is_hermitian() {
                    return Err(Error::InvalidCircuit(format!(
                        "Pauli operator {pauli} is not Hermitian"
                    )));
                }
                Ok(())
            }
            Gate::Controlled { inner, .. } => self.validate_kind(inner),
        }
    }

    /// Serializes to the line-oriented text format.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn gate_kind(g: &Gate) -> &'static str {
    match g {
        Gate::Clifford(CliffordGate::H(_)) => "H",
        Gate::Clifford(CliffordGate::S(_)) => "S",
        Gate::Clifford(CliffordGate::X(_)) => "X",
        Gate::Clifford(CliffordGate::Z(_)) => "Z",
        Gate::Clifford(CliffordGate::Cnot { .. }) => "CNOT",
        Gate::Clifford(CliffordGate::Cz(..)) => "CZ",
        Gate::Dense { .. } => "dense",
        Gate::PauliExp { .. } => "exppauli",
        Gate::Controlled { .. } => "controlled",
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 2 {
            writeln!(f, "circuit {}", self.n)?;
        } else {
            writeln!(f, "circuit {} dim {}", self.n, self.d)?;
        }
        let mut breaks = self.layer_breaks.iter().peekable();
        for (i, g) in self.gates.iter().enumerate() {
            while breaks.peek() == Some(&&i) {
                writeln!(f, "---")?;
                breaks.next();
            }
            writeln!(f, "{g}")?;
        }
        for _ in breaks {
            writeln!(f, "---")?;
        }
        Ok(())
    }
}

impl FromStr for Circuit {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_circuit(s)
    }
}
