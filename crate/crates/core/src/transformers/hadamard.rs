use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, CliffordGate, Gate};
use crate::error::Error;
use crate::linalg::{block_diag2, diag, embed, hadamard, CMatrix, C64, ONE};

/// Which part of a matrix element a test circuit encodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Part {
    #[default]
    Re,
    Im,
}

impl FromStr for Part {
    type Err = String;

    fn from_str(s: &str) -> Result<Part, String> {
        match s {
            "re" | "real" => Ok(Part::Re),
            "im" | "imag" => Ok(Part::Im),
            _ => Err(format!("expected re or im, got {s:?}")),
        }
    }
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Part::Re => "re",
            Part::Im => "im",
        })
    }
}

/// One controlled block `|0⟩⟨0| ⊗ A + |1⟩⟨1| ⊗ B` on `wires`; `None` is the
/// identity.
pub(crate) struct Block {
    pub wires: Vec<usize>,
    pub zero: Option<CMatrix>,
    pub one: Option<CMatrix>,
}

fn require_qubits(c: &Circuit) -> Result<(), Error> {
    if c.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "test circuits need qubits, got dimension {}",
            c.dim()
        )));
    }
    Ok(())
}

fn s_dagger() -> CMatrix {
    diag(&[ONE, C64::new(0.0, -1.0)])
}

/// `(H ⊗ I) W (H ⊗ I)` with `H` on the first tensor factor.
fn fold(w: &CMatrix) -> CMatrix {
    let rest = w.nrows() / 2;
    let h = hadamard().kronecker(&CMatrix::identity(rest, rest));
    &h * w * &h
}

fn shifted(wires: &[usize]) -> Vec<usize> {
    std::iter::once(0).chain(wires.iter().map(|q| q + 1)).collect()
}

/// Folds the blocks into a commuting circuit on `n + 1` qubits, ancilla
/// first. With `Part::Im` a phase `-i` rides on the `|1⟩` branch of the first
/// block, so `p(0) = ½(1 + Im⟨a|b⟩)`.
pub(crate) fn fold_blocks(n: usize, blocks: Vec<Block>, part: Part) -> Circuit {
    let mut out = Circuit::qubits(n + 1);
    if blocks.is_empty() {
        if part == Part::Im {
            out.push_unchecked(Gate::dense(vec![0], fold(&s_dagger())));
        }
        return out;
    }
    for (i, b) in blocks.into_iter().enumerate() {
        let dim = 1usize << b.wires.len();
        let a = b.zero.unwrap_or_else(|| CMatrix::identity(dim, dim));
        let mut one = b.one.unwrap_or_else(|| CMatrix::identity(dim, dim));
        if i == 0 && part == Part::Im {
            one *= C64::new(0.0, -1.0);
        }
        out.push_unchecked(Gate::dense(shifted(&b.wires), fold(&block_diag2(&a, &one))));
    }
    out
}

/// Hadamard test of a commuting qubit circuit `𝒞`, with every controlled
/// gate conjugated by `H` on the ancilla so that the result is again a
/// commuting circuit (one qubit wider per gate). Run on `|0⟩`, qubit 1 reads
/// 0 with probability `½(1 + Re⟨0|𝒞|0⟩)`, or `½(1 + Im⟨0|𝒞|0⟩)` for
/// `Part::Im`. The original qubits move up by one.
pub fn hadamard_test(c: &Circuit, part: Part) -> Result<Circuit, Error> {
    require_qubits(c)?;
    c.check_commuting()?;
    Ok(hadamard_test_unchecked(c, part))
}

/// [`hadamard_test`] without the commutation check.
pub fn hadamard_test_unchecked(c: &Circuit, part: Part) -> Circuit {
    let blocks = c
        .gates()
        .iter()
        .map(|g| Block {
            wires: g.wires(),
            zero: None,
            one: Some(g.local_matrix()),
        })
        .collect();
    fold_blocks(c.num_qudits(), blocks, part)
}

/// Alternate Hadamard test of an arbitrary qubit circuit `𝒰 = U_{2m}⋯U_1`:
/// `H`, then `W_i = |0⟩⟨0| ⊗ U†_{2m+1−i} + |1⟩⟨1| ⊗ U_i` for `i = 1..m`, then
/// `H` (or `H S†` for `Part::Im`) on the ancilla. Odd sizes are padded with
/// an identity gate. Emits `⌈size/2⌉ + 2` gates.
pub fn alternate_hadamard_test(c: &Circuit, part: Part) -> Result<Circuit, Error> {
    require_qubits(c)?;
    let n = c.num_qudits();
    let gates = c.gates();
    let m = gates.len().div_ceil(2);
    let mut out = Circuit::qubits(n + 1);
    out.push_unchecked(CliffordGate::H(0).into());
    for i in 1..=m {
        let right = &gates[i - 1];
        let left = gates.get(2 * m - i);
        let mut wires = right.support();
        if let Some(l) = left {
            wires.extend(l.support());
            wires.sort_unstable();
            wires.dedup();
        }
        let dim = 1usize << wires.len();
        let one = embed(&right.local_matrix(), &right.wires(), &wires, 2);
        let zero = match left {
            Some(l) => embed(&l.local_matrix(), &l.wires(), &wires, 2).adjoint(),
            None => CMatrix::identity(dim, dim),
        };
        out.push_unchecked(Gate::dense(shifted(&wires), block_diag2(&zero, &one)));
    }
    match part {
        Part::Re => out.push_unchecked(CliffordGate::H(0).into()),
        Part::Im => out.push_unchecked(Gate::dense(vec![0], hadamard() * s_dagger())),
    }
    Ok(out)
}

/// Commuting test circuit for `⟨0|𝒞₁𝒞₂|0⟩` where `𝒞₁` and `𝒞₂` are each
/// commuting (but need not commute with each other).
///
/// Gates of both circuits are grouped by support: groups are opened for the
/// distinct supports from largest to smallest, and each gate joins the first
/// group containing its support. Each group holds one merged gate `G` of
/// `𝒞₁` and one `G'` of `𝒞₂` (identity when absent) and becomes
/// `[H ⊗ I](|0⟩⟨0| ⊗ G† + |1⟩⟨1| ⊗ G')[H ⊗ I]`.
pub fn two_layer_merge(c1: &Circuit, c2: &Circuit, part: Part) -> Result<Circuit, Error> {
    require_qubits(c1)?;
    require_qubits(c2)?;
    if c1.num_qudits() != c2.num_qudits() {
        return Err(Error::SizeMismatch(c1.num_qudits(), c2.num_qudits()));
    }
    c1.check_commuting()?;
    c2.check_commuting()?;
    let mut supports: Vec<Vec<usize>> = c1.gates().iter().chain(c2.gates()).map(|g| g.support()).collect();
    supports.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    supports.dedup();
    let mut groups: Vec<Block> = Vec::new();
    for s in supports {
        if !groups.iter().any(|b| s.iter().all(|q| b.wires.contains(q))) {
            groups.push(Block {
                wires: s,
                zero: None,
                one: None,
            });
        }
    }
    for (layer, c) in [(0, c1), (1, c2)] {
        for g in c.gates() {
            let support = g.support();
            let b = groups
                .iter_mut()
                .find(|b| support.iter().all(|q| b.wires.contains(q)))
                .expect("every support has a group");
            let m = embed(&g.local_matrix(), &g.wires(), &b.wires, 2);
            let slot = if layer == 0 { &mut b.zero } else { &mut b.one };
            *slot = Some(match slot.take() {
                Some(acc) => m * acc,
                None => m,
            });
        }
    }
    for b in &mut groups {
        b.zero = b.zero.take().map(|g| g.adjoint());
    }
    Ok(fold_blocks(c1.num_qudits(), groups, part))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{matrix_element, run_from_zero, OracleConfig};
    use crate::pauli::PauliOperator;

    fn p0(c: &Circuit) -> f64 {
        run_from_zero(c, &OracleConfig::default()).unwrap().marginal(0)[0]
    }

    fn element(c: &Circuit) -> C64 {
        let z = vec![0; c.num_qudits()];
        matrix_element(c, &z, &z, &OracleConfig::default()).unwrap()
    }

    fn pauli_circuit(n: usize, gates: &[(f64, &str)]) -> Circuit {
        Circuit::from_gates(
            n,
            2,
            gates
                .iter()
                .map(|(t, s)| Gate::pauli_exp(*t, PauliOperator::parse(s).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn hadamard_test_examples() {
        let x = Circuit::from_gates(1, 2, [CliffordGate::X(0).into()]).unwrap();
        assert!((p0(&hadamard_test(&x, Part::Re).unwrap()) - 0.5).abs() < 1e-12);
        let cz = Circuit::from_gates(2, 2, [CliffordGate::Cz(0, 1).into()]).unwrap();
        assert!((p0(&hadamard_test(&cz, Part::Re).unwrap()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hadamard_test_pauli_circuit_both_parts() {
        let c = pauli_circuit(4, &[(0.3, "XXII"), (0.7, "ZZII"), (-0.4, "YYYY"), (1.1, "IIXX")]);
        let z = element(&c);
        for (part, want) in [(Part::Re, z.re), (Part::Im, z.im)] {
            let t = hadamard_test(&c, part).unwrap();
            assert!(t.is_commuting());
            assert!((p0(&t) - 0.5 * (1.0 + want)).abs() < 1e-9);
        }
    }

    #[test]
    fn hadamard_test_rejects_noncommuting() {
        let c = Circuit::from_gates(1, 2, [CliffordGate::H(0).into(), CliffordGate::Z(0).into()]).unwrap();
        assert!(matches!(hadamard_test(&c, Part::Re), Err(Error::NotCommuting(0, 1))));
    }

    #[test]
    fn alternate_test_examples() {
        let xx = Circuit::from_gates(1, 2, [CliffordGate::X(0).into(), CliffordGate::X(0).into()]).unwrap();
        let t = alternate_hadamard_test(&xx, Part::Re).unwrap();
        assert_eq!(t.len(), 3);
        assert!((p0(&t) - 1.0).abs() < 1e-12);
        let c = Circuit::from_gates(
            2,
            2,
            [
                CliffordGate::H(0).into(),
                CliffordGate::Cnot { control: 0, target: 1 }.into(),
                Gate::pauli_exp(0.4, PauliOperator::parse("YX").unwrap()),
            ],
        )
        .unwrap();
        let z = element(&c);
        for (part, want) in [(Part::Re, z.re), (Part::Im, z.im)] {
            let t = alternate_hadamard_test(&c, part).unwrap();
            assert_eq!(t.len(), 4);
            assert!((p0(&t) - 0.5 * (1.0 + want)).abs() < 1e-12);
        }
    }

    #[test]
    fn merge_examples() {
        let z = Circuit::from_gates(1, 2, [CliffordGate::Z(0).into()]).unwrap();
        let x = Circuit::from_gates(1, 2, [CliffordGate::X(0).into()]).unwrap();
        assert!((p0(&two_layer_merge(&z, &z, Part::Re).unwrap()) - 1.0).abs() < 1e-12);
        assert!((p0(&two_layer_merge(&x, &z, Part::Re).unwrap()) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn merge_matches_product() {
        let c1 = pauli_circuit(3, &[(0.3, "XXI"), (0.5, "YYI"), (0.2, "ZZZ")]);
        let c2 = pauli_circuit(3, &[(0.9, "ZIZ"), (-0.6, "ZZI"), (0.4, "IIZ")]);
        let mut both = c2.clone();
        for g in c1.gates() {
            both.push(g.clone()).unwrap();
        }
        let z = element(&both);
        for (part, want) in [(Part::Re, z.re), (Part::Im, z.im)] {
            let t = two_layer_merge(&c1, &c2, part).unwrap();
            assert!(t.is_commuting());
            assert!((p0(&t) - 0.5 * (1.0 + want)).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_inputs() {
        let e = Circuit::qubits(2);
        assert!((p0(&hadamard_test(&e, Part::Re).unwrap()) - 1.0).abs() < 1e-12);
        assert!((p0(&hadamard_test(&e, Part::Im).unwrap()) - 0.5).abs() < 1e-12);
        assert_eq!(alternate_hadamard_test(&e, Part::Re).unwrap().len(), 2);
    }
}
