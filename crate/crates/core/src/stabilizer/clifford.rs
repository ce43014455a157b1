use std::fmt;

use crate::circuit::{Circuit, CliffordGate, Gate};
use crate::error::Error;
use crate::pauli::PauliOperator;

/// Which way to push a Pauli operator through a circuit `C`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `C P C†`
    Forward,
    /// `C† P C`
    Inverse,
}

/// An ordered list of named Clifford gates on `n` qubits; the first gate
/// acts first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliffordCircuit {
    n: usize,
    gates: Vec<CliffordGate>,
}

impl CliffordCircuit {
    pub fn new(n: usize) -> CliffordCircuit {
        CliffordCircuit { n, gates: Vec::new() }
    }

    pub fn from_gates<I: IntoIterator<Item = CliffordGate>>(n: usize, gates: I) -> Result<CliffordCircuit, Error> {
        let mut c = CliffordCircuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    /// Extracts the named Clifford gates of a circuit; any other gate kind
    /// is an error.
    pub fn from_circuit(c: &Circuit) -> Result<CliffordCircuit, Error> {
        if c.dim() != 2 {
            return Err(Error::InvalidCircuit("Clifford circuits act on qubits".into()));
        }
        let mut out = CliffordCircuit::new(c.num_qudits());
        for (i, g) in c.gates().iter().enumerate() {
            match g {
                Gate::Clifford(cg) => out.gates.push(*cg),
                _ => {
                    return Err(Error::InvalidCircuit(format!(
                        "gate {} is not a named Clifford gate",
                        i + 1
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn push(&mut self, g: CliffordGate) -> Result<&mut Self, Error> {
        let qs = g.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= self.n) {
            return Err(Error::InvalidCircuit(format!(
                "qubit {} out of range 1..={}",
                q + 1,
                self.n
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidCircuit("two-qubit gate on a single qubit".into()));
        }
        self.gates.push(g);
        Ok(self)
    }

    pub(crate) fn push_unchecked(&mut self, g: CliffordGate) {
        self.gates.push(g);
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[CliffordGate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// `C†` using only named gates: order reversed, each `S` becomes `S S S`.
    pub fn inverse(&self) -> CliffordCircuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in self.gates.iter().rev() {
            match g {
                CliffordGate::S(_) => gates.extend([*g; 3]),
                _ => gates.push(*g),
            }
        }
        CliffordCircuit { n: self.n, gates }
    }

    pub fn to_circuit(&self) -> Circuit {
        let mut c = Circuit::qubits(self.n);
        for g in &self.gates {
            c.push_unchecked(Gate::Clifford(*g));
        }
        c
    }

    /// Exact image of `p` under conjugation by the whole circuit.
    pub fn conjugate_pauli(&self, p: &PauliOperator, direction: Direction) -> PauliOperator {
        assert_eq!(p.num_qubits(), self.n, "Pauli operator and circuit sizes differ");
        let mut out = p.clone();
        self.conjugate_in_place(&mut out, direction);
        out
    }

    pub(crate) fn conjugate_in_place(&self, p: &mut PauliOperator, direction: Direction) {
        match direction {
            Direction::Forward => self.gates.iter().for_each(|g| conjugate_gate(g, p, false)),
            Direction::Inverse => self.gates.iter().rev().for_each(|g| conjugate_gate(g, p, true)),
        }
    }
}

impl fmt::Display for CliffordCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_circuit())
    }
}

/// `p ← g p g†`, or `g† p g` when `inverse` is set.
pub(crate) fn conjugate_gate(g: &CliffordGate, p: &mut PauliOperator, inverse: bool) {
    let (t, x, z) = p.parts_mut();
    match *g {
        CliffordGate::H(q) => {
            let (a, b) = (x.get(q), z.get(q));
            x.set(q, b);
            z.set(q, a);
            if a && b {
                *t = (*t + 2) % 4;
            }
        }
        CliffordGate::S(q) => {
            if x.get(q) {
                *t = (*t + if inverse { 3 } else { 1 }) % 4;
                z.flip(q);
            }
        }
        CliffordGate::X(q) => {
            if z.get(q) {
                *t = (*t + 2) % 4;
            }
        }
        CliffordGate::Z(q) => {
            if x.get(q) {
                *t = (*t + 2) % 4;
            }
        }
        CliffordGate::Cnot { control, target } => {
            if x.get(control) {
                x.flip(target);
            }
            if z.get(target) {
                z.flip(control);
            }
        }
        CliffordGate::Cz(a, b) => {
            let (xa, xb) = (x.get(a), x.get(b));
            if xa {
                z.flip(b);
            }
            if xb {
                z.flip(a);
            }
            if xa && xb {
                *t = (*t + 2) % 4;
            }
        }
    }
}
