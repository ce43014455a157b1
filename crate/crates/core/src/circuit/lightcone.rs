use super::Circuit;

/// Backward lightcone of qudit `j`: every qudit that can influence `j`
/// through the gates of `c`, found by walking the gates from last to first.
/// Sorted.
pub fn support_lightcone(c: &Circuit, j: usize) -> Vec<usize> {
    let (cone, _) = traverse(c, j);
    cone
}

/// Indices (in circuit order) of the gates inside the backward lightcone of
/// `j`. Conjugating an operator on `j` by these gates alone gives the same
/// result as conjugating by the whole circuit.
pub fn lightcone_gates(c: &Circuit, j: usize) -> Vec<usize> {
    let (_, gates) = traverse(c, j);
    gates
}

fn traverse(c: &Circuit, j: usize) -> (Vec<usize>, Vec<usize>) {
    let mut inside = vec![false; c.num_qudits()];
    inside[j] = true;
    let mut gates = Vec::new();
    for (idx, g) in c.gates().iter().enumerate().rev() {
        let support = g.support();
        if support.iter().any(|&q| inside[q]) {
            support.iter().for_each(|&q| inside[q] = true);
            gates.push(idx);
        }
    }
    gates.reverse();
    let cone = (0..c.num_qudits()).filter(|&q| inside[q]).collect();
    (cone, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CliffordGate;

    #[test]
    fn empty_circuit_cone_is_the_qubit() {
        assert_eq!(support_lightcone(&Circuit::qubits(4), 2), vec![2]);
    }

    #[test]
    fn single_layer() {
        let c = Circuit::from_gates(4, 2, [CliffordGate::Cz(0, 1).into(), CliffordGate::Cz(2, 3).into()]).unwrap();
        assert_eq!(support_lightcone(&c, 0), vec![0, 1]);
        assert_eq!(lightcone_gates(&c, 0), vec![0]);
    }

    #[test]
    fn ladder_of_depth_two() {
        let mut c = Circuit::qubits(6);
        for q in [0, 2, 4] {
            c.push(CliffordGate::Cz(q, q + 1).into()).unwrap();
        }
        c.push_layer_break();
        for q in [1, 3] {
            c.push(CliffordGate::Cz(q, q + 1).into()).unwrap();
        }
        assert_eq!(support_lightcone(&c, 1), vec![0, 1, 2, 3]);
        assert_eq!(lightcone_gates(&c, 1), vec![0, 1, 3]);
    }
}
