use std::fmt;

use crate::linalg::{self, block_diag2, pauli_matrix_on, CMatrix, C64, ONE, ZERO};
use crate::pauli::PauliOperator;

/// Named Clifford gates. Qubits are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CliffordGate {
    H(usize),
    /// `diag(1, i)`
    S(usize),
    X(usize),
    Z(usize),
    Cnot { control: usize, target: usize },
    Cz(usize, usize),
}

impl CliffordGate {
    /// Qubits in the tensor order of [`CliffordGate::matrix`].
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            CliffordGate::H(q) | CliffordGate::S(q) | CliffordGate::X(q) | CliffordGate::Z(q) => {
                vec![q]
            }
            CliffordGate::Cnot { control, target } => vec![control, target],
            CliffordGate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn matrix(&self) -> CMatrix {
        let i = C64::new(0.0, 1.0);
        match self {
            CliffordGate::H(_) => linalg::hadamard(),
            CliffordGate::S(_) => linalg::diag(&[ONE, i]),
            CliffordGate::X(_) => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            CliffordGate::Z(_) => linalg::diag(&[ONE, -ONE]),
            CliffordGate::Cnot { .. } => {
                let mut m = CMatrix::zeros(4, 4);
                for (r, c) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
                    m[(r, c)] = ONE;
                }
                m
            }
            CliffordGate::Cz(..) => linalg::diag(&[ONE, ONE, ONE, -ONE]),
        }
    }

    /// Same gate with qubits shifted by `offset`.
    pub fn shifted(&self, offset: usize) -> CliffordGate {
        match *self {
            CliffordGate::H(q) => CliffordGate::H(q + offset),
            CliffordGate::S(q) => CliffordGate::S(q + offset),
            CliffordGate::X(q) => CliffordGate::X(q + offset),
            CliffordGate::Z(q) => CliffordGate::Z(q + offset),
            CliffordGate::Cnot { control, target } => CliffordGate::Cnot {
                control: control + offset,
                target: target + offset,
            },
            CliffordGate::Cz(a, b) => CliffordGate::Cz(a + offset, b + offset),
        }
    }

    pub fn keyword(&self) -> &'static str {
        match self {
            CliffordGate::H(_) => "h",
            CliffordGate::S(_) => "s",
            CliffordGate::X(_) => "x",
            CliffordGate::Z(_) => "z",
            CliffordGate::Cnot { .. } => "cnot",
            CliffordGate::Cz(..) => "cz",
        }
    }
}

/// A gate of the circuit IR.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Clifford(CliffordGate),
    /// Arbitrary unitary on `qudits`, in their listed tensor order.
    Dense { qudits: Vec<usize>, matrix: CMatrix },
    /// `exp(iθP)` for a Hermitian Pauli operator on the whole register.
    PauliExp { theta: f64, pauli: PauliOperator },
    /// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ inner` with the control listed first.
    Controlled { control: usize, inner: Box<Gate> },
}

impl Gate {
    pub fn dense(qudits: Vec<usize>, matrix: CMatrix) -> Gate {
        Gate::Dense { qudits, matrix }
    }

    pub fn pauli_exp(theta: f64, pauli: PauliOperator) -> Gate {
        Gate::PauliExp { theta, pauli }
    }

    pub fn controlled(control: usize, inner: Gate) -> Gate {
        Gate::Controlled {
            control,
            inner: Box::new(inner),
        }
    }

    /// Qudits in the tensor order used by [`Gate::local_matrix`].
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::Clifford(g) => g.qubits(),
            Gate::Dense { qudits, .. } => qudits.clone(),
            Gate::PauliExp { pauli, .. } => pauli.support(),
            Gate::Controlled { control, inner } => {
                let mut w = vec![*control];
                w.extend(inner.wires());
                w
            }
        }
    }

    /// Sorted support.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.wires();
        s.sort_unstable();
        s
    }

    pub fn locality(&self) -> usize {
        self.wires().len()
    }

    /// Unitary on [`Gate::wires`] for local dimension `d`.
    pub fn local_matrix(&self) -> CMatrix {
        match self {
            Gate::Clifford(g) => g.matrix(),
            Gate::Dense { matrix, .. } => matrix.clone(),
            Gate::PauliExp { theta, pauli } => {
                let wires = pauli.support();
                let p = pauli_matrix_on(pauli, &wires);
                let dim = p.nrows();
                let (s, c) = theta.sin_cos();
                CMatrix::identity(dim, dim) * C64::new(c, 0.0) + p * C64::new(0.0, s)
            }
            Gate::Controlled { inner, .. } => {
                let u = inner.local_matrix();
                let dim = u.nrows();
                block_diag2(&CMatrix::identity(dim, dim), &u)
            }
        }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::Clifford(CliffordGate::S(q)) => Gate::Dense {
                qudits: vec![*q],
                matrix: linalg::diag(&[ONE, C64::new(0.0, -1.0)]),
            },
            Gate::Clifford(g) => Gate::Clifford(*g),
            Gate::Dense { qudits, matrix } => Gate::Dense {
                qudits: qudits.clone(),
                matrix: matrix.adjoint(),
            },
            Gate::PauliExp { theta, pauli } => Gate::PauliExp {
                theta: -theta,
                pauli: pauli.clone(),
            },
            Gate::Controlled { control, inner } => Gate::Controlled {
                control: *control,
                inner: Box::new(inner.inverse()),
            },
        }
    }

    /// True for gate kinds that are only defined on qubits.
    pub fn requires_qubits(&self) -> bool {
        !matches!(self, Gate::Dense { .. })
    }
}

impl From<CliffordGate> for Gate {
    fn from(g: CliffordGate) -> Gate {
        Gate::Clifford(g)
    }
}

impl fmt::Display for CliffordGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.keyword())?;
        for q in self.qubits() {
            write!(f, " {}", q + 1)?;
        }
        Ok(())
    }
}

/// One line of the circuit text format (without trailing newline).
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Clifford(g) => write!(f, "{g}"),
            Gate::Dense { qudits, matrix } => {
                write!(f, "dense {}", qudits.len())?;
                for q in qudits {
                    write!(f, " {}", q + 1)?;
                }
                for r in 0..matrix.nrows() {
                    for c in 0..matrix.ncols() {
                        let z = matrix[(r, c)];
                        write!(f, " {} {}", z.re, z.im)?;
                    }
                }
                Ok(())
            }
            Gate::PauliExp { theta, pauli } => write!(f, "exppauli {} {}", theta, pauli.format()),
            Gate::Controlled { control, inner } => write!(f, "ctrl {} {}", control + 1, inner),
        }
    }
}
