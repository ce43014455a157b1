//! Gaussian elimination over GF(2) on packed bit rows.

use crate::bits::BitString;
use crate::pauli::PauliOperator;

/// Incremental row basis: each stored row has a 1 at its pivot and 0 at the
/// pivots of all earlier rows.
#[derive(Clone, Debug, Default)]
pub(crate) struct RowBasis {
    rows: Vec<(BitString, usize)>,
}

impl RowBasis {
    pub(crate) fn reduce(&self, v: &mut BitString) {
        for (row, p) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
            }
        }
    }

    /// Adds `v` if it is independent of the stored rows.
    pub(crate) fn insert(&mut self, mut v: BitString) -> bool {
        self.reduce(&mut v);
        match v.first_one() {
            Some(p) => {
                self.rows.push((v, p));
                true
            }
            None => false,
        }
    }
}

fn symplectic_bits(p: &PauliOperator) -> BitString {
    p.symplectic().bits().clone()
}

/// Index of the first operator whose symplectic vector depends on the
/// earlier ones.
pub(crate) fn first_dependent(ps: &[PauliOperator]) -> Option<usize> {
    let mut basis = RowBasis::default();
    ps.iter().position(|p| !basis.insert(symplectic_bits(p)))
}

/// Indices of a maximal independent subset, chosen greedily in input order.
pub(crate) fn independent_subset(ps: &[PauliOperator]) -> Vec<usize> {
    let mut basis = RowBasis::default();
    (0..ps.len())
        .filter(|&i| basis.insert(symplectic_bits(&ps[i])))
        .collect()
}

/// A solution of `b_j · y = c_j` over GF(2) with free variables set to 0,
/// or `None` if the system is inconsistent.
pub(crate) fn solve(eqs: &[(BitString, bool)], n: usize) -> Option<BitString> {
    // augment each row with its right-hand side in column n
    let mut rows: Vec<(BitString, usize)> = Vec::new();
    for (b, c) in eqs {
        let mut v = BitString::zeros(n + 1);
        for q in b.ones() {
            v.set(q, true);
        }
        v.set(n, *c);
        for (row, p) in &rows {
            if v.get(*p) {
                v.xor_assign(row);
            }
        }
        match v.first_one() {
            Some(p) if p < n => rows.push((v, p)),
            Some(_) => return None,
            None => {}
        }
    }
    for k in (0..rows.len()).rev() {
        let (row, p) = rows[k].clone();
        for (other, _) in rows.iter_mut().take(k) {
            if other.get(p) {
                other.xor_assign(&row);
            }
        }
    }
    let mut y = BitString::zeros(n);
    for (row, p) in &rows {
        y.set(*p, row.get(n));
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let eqs = vec![
            (BitString::parse("110").unwrap(), true),
            (BitString::parse("011").unwrap(), false),
        ];
        let y = solve(&eqs, 3).unwrap();
        for (b, c) in &eqs {
            assert_eq!(b.dot(&y), *c);
        }
        let bad = vec![
            (BitString::parse("11").unwrap(), true),
            (BitString::parse("11").unwrap(), false),
        ];
        assert!(solve(&bad, 2).is_none());
    }

    #[test]
    fn dependence() {
        let p = |s: &str| PauliOperator::parse(s).unwrap();
        let ps = vec![p("XX"), p("ZZ"), p("-YY"), p("ZI")];
        assert_eq!(first_dependent(&ps), Some(2));
        assert_eq!(independent_subset(&ps), vec![0, 1, 3]);
    }
}
