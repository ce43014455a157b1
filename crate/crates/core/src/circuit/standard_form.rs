use super::Circuit;
use super::Gate;
use crate::error::Error;
use crate::linalg::{embed, pow_usize, CMatrix};

/// Merges the gates of a k-local commuting circuit so that at most one gate
/// acts on each size-k qudit subset. Every output gate is `Dense` on its
/// (sorted) subset and equals the product of the merged gates in input order.
///
/// A gate joins the first existing group whose subset contains its support;
/// otherwise it opens a new group whose subset is its support padded with the
/// lowest unused qudits.
pub fn standard_form(c: &Circuit, k: usize) -> Result<Circuit, Error> {
    c.check_locality(k)?;
    c.check_commuting()?;
    Ok(standard_form_unchecked(c, k))
}

/// [`standard_form`] without the locality and commutation checks. The
/// result is only meaningful for commuting inputs.
pub fn standard_form_unchecked(c: &Circuit, k: usize) -> Circuit {
    let n = c.num_qudits();
    let d = c.dim();
    let width = k.min(n);
    let mut groups: Vec<(Vec<usize>, CMatrix)> = Vec::new();
    for g in c.gates() {
        let support = g.support();
        let slot = groups
            .iter()
            .position(|(subset, _)| support.iter().all(|q| subset.contains(q)));
        let idx = match slot {
            Some(i) => i,
            None => {
                let mut subset = support.clone();
                for q in 0..n {
                    if subset.len() >= width {
                        break;
                    }
                    if !subset.contains(&q) {
                        subset.push(q);
                    }
                }
                subset.sort_unstable();
                let dim = pow_usize(d, subset.len()).expect("subset too large");
                groups.push((subset, CMatrix::identity(dim, dim)));
                groups.len() - 1
            }
        };
        let (subset, acc) = &mut groups[idx];
        let local = embed(&g.local_matrix(), &g.wires(), subset, d);
        *acc = local * &*acc;
    }
    let mut out = Circuit::new(n, d).expect("dimension already validated");
    for (subset, matrix) in groups {
        out.push_unchecked(Gate::Dense {
            qudits: subset,
            matrix,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CliffordGate;
    use crate::linalg::{diag, frobenius, ONE};

    #[test]
    fn cz_squared_is_identity() {
        let c = Circuit::from_gates(2, 2, [CliffordGate::Cz(0, 1).into(), CliffordGate::Cz(0, 1).into()]).unwrap();
        let sf = standard_form(&c, 2).unwrap();
        assert_eq!(sf.len(), 1);
        let Gate::Dense { qudits, matrix } = &sf.gates()[0] else { panic!() };
        assert_eq!(qudits, &vec![0, 1]);
        assert!(frobenius(&(matrix - CMatrix::identity(4, 4))) < 1e-12);
    }

    #[test]
    fn disjoint_z_gates_share_a_subset() {
        let c = Circuit::from_gates(2, 2, [CliffordGate::Z(0).into(), CliffordGate::Z(1).into()]).unwrap();
        let sf = standard_form(&c, 2).unwrap();
        assert_eq!(sf.len(), 1);
        let Gate::Dense { matrix, .. } = &sf.gates()[0] else { panic!() };
        assert!(frobenius(&(matrix - diag(&[ONE, -ONE, -ONE, ONE]))) < 1e-12);
    }

    #[test]
    fn errors_on_violations() {
        let c = Circuit::from_gates(2, 2, [CliffordGate::H(0).into(), CliffordGate::Z(0).into()]).unwrap();
        assert!(matches!(standard_form(&c, 2), Err(Error::NotCommuting(0, 1))));
        let c = Circuit::from_gates(3, 2, [Gate::dense(vec![0, 1, 2], CMatrix::identity(8, 8))]).unwrap();
        assert!(matches!(standard_form(&c, 2), Err(Error::LocalityExceeded { gate: 0, size: 3, k: 2 })));
    }
}
