use super::clifford::{conjugate_gate, CliffordCircuit, Direction};
use super::gf2;
use super::state::{check_commuting, StabilizerState};
use crate::circuit::CliffordGate;
use crate::error::Error;
use crate::pauli::PauliOperator;

/// A Clifford circuit `W` with `W g_k W† = +Z_{p_k}` for each input `g_k`.
struct Reduction {
    w: CliffordCircuit,
    pivots: Vec<usize>,
}

struct Reducer {
    w: CliffordCircuit,
    images: Vec<PauliOperator>,
}

impl Reducer {
    fn apply(&mut self, g: CliffordGate) {
        for p in &mut self.images {
            conjugate_gate(&g, p, false);
        }
        self.w.push_unchecked(g);
    }
}

/// Maps independent, commuting Hermitian operators one by one onto `+Z` on
/// distinct pivot qubits. Earlier images are never disturbed: every gate
/// emitted for generator `k` avoids X-parts on previous pivots.
fn reduce_to_z(n: usize, gens: &[PauliOperator]) -> Result<Reduction, Error> {
    let mut red = Reducer {
        w: CliffordCircuit::new(n),
        images: gens.to_vec(),
    };
    let mut is_pivot = vec![false; n];
    let mut pivots = Vec::with_capacity(gens.len());
    for k in 0..gens.len() {
        let h = red.images[k].clone();
        let free_x = (0..n).find(|&q| !is_pivot[q] && h.x_part().get(q));
        let p = match free_x {
            Some(p) => {
                for q in h.x_part().ones().filter(|&q| q != p).collect::<Vec<_>>() {
                    red.apply(CliffordGate::Cnot { control: p, target: q });
                }
                if red.images[k].z_part().get(p) {
                    red.apply(CliffordGate::S(p));
                }
                let zs: Vec<usize> = red.images[k].z_part().ones().filter(|&q| q != p).collect();
                for q in zs {
                    red.apply(CliffordGate::Cz(p, q));
                }
                red.apply(CliffordGate::H(p));
                p
            }
            None => {
                // h = ±Z^b: fold the other Z's onto one free qubit
                let Some(p) = (0..n).find(|&q| !is_pivot[q] && h.z_part().get(q)) else {
                    return Err(if h.phase() == 2 {
                        Error::MinusIdentity
                    } else {
                        Error::DependentInput(k)
                    });
                };
                for q in h.z_part().ones().filter(|&q| q != p).collect::<Vec<_>>() {
                    red.apply(CliffordGate::Cnot { control: q, target: p });
                }
                p
            }
        };
        if red.images[k].phase() == 2 {
            red.apply(CliffordGate::X(p));
        }
        debug_assert_eq!(red.images[k], PauliOperator::single_z(n, p));
        is_pivot[p] = true;
        pivots.push(p);
    }
    Ok(Reduction { w: red.w, pivots })
}

fn validate(ps: &[PauliOperator]) -> Result<usize, Error> {
    let n = ps.first().map_or(0, |p| p.num_qubits());
    for (i, p) in ps.iter().enumerate() {
        if p.num_qubits() != n {
            return Err(Error::SizeMismatch(n, p.num_qubits()));
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(i));
        }
    }
    check_commuting(ps)?;
    Ok(n)
}

/// Extends independent commuting Hermitian operators on `n` qubits to a full
/// generator set. The first generators of the result are the inputs.
pub fn complete_generators(n: usize, indep: &[PauliOperator]) -> Result<StabilizerState, Error> {
    if let Some(p) = indep.iter().find(|p| p.num_qubits() != n) {
        return Err(Error::SizeMismatch(n, p.num_qubits()));
    }
    validate(indep)?;
    let red = reduce_to_z(n, indep)?;
    let mut gens = indep.to_vec();
    let mut used = vec![false; n];
    red.pivots.iter().for_each(|&p| used[p] = true);
    for q in (0..n).filter(|&q| !used[q]) {
        gens.push(red.w.conjugate_pauli(&PauliOperator::single_z(n, q), Direction::Inverse));
    }
    Ok(StabilizerState::from_generators_unchecked(gens))
}

/// A circuit `C` with `C|0…0⟩` stabilized by the generator group of `s`.
/// Uses `O(n²)` gates.
pub fn synthesize_prep(s: &StabilizerState) -> CliffordCircuit {
    reduce_to_z(s.num_qubits(), s.generators())
        .expect("stabilizer generators are independent")
        .w
        .inverse()
}

/// Simultaneously diagonalizes commuting Hermitian Pauli operators: returns
/// `C` and `Q_i = C† P_i C`, each `±` a product of `Z`s. Dependent inputs
/// are allowed; they are skipped while building `C` and conjugated directly.
pub fn diagonalize_commuting_set(paulis: &[PauliOperator]) -> Result<(CliffordCircuit, Vec<PauliOperator>), Error> {
    let n = validate(paulis)?;
    let chosen: Vec<PauliOperator> = gf2::independent_subset(paulis)
        .into_iter()
        .map(|i| paulis[i].clone())
        .collect();
    let red = reduce_to_z(n, &chosen).expect("independent subset reduces");
    let q = paulis
        .iter()
        .map(|p| red.w.conjugate_pauli(p, Direction::Forward))
        .collect();
    Ok((red.w.inverse(), q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s).unwrap()
    }

    fn cluster(n: usize) -> Vec<PauliOperator> {
        (0..n)
            .map(|j| {
                let mut s = vec!['I'; n];
                s[j] = 'X';
                if j > 0 {
                    s[j - 1] = 'Z';
                }
                if j + 1 < n {
                    s[j + 1] = 'Z';
                }
                p(&s.into_iter().collect::<String>())
            })
            .collect()
    }

    #[test]
    fn z_inputs_need_no_gates() {
        let zs: Vec<_> = (0..4).map(|q| PauliOperator::single_z(4, q)).collect();
        let (c, q) = diagonalize_commuting_set(&zs).unwrap();
        assert!(c.is_empty());
        assert_eq!(q, zs);
    }

    #[test]
    fn cluster_stabilizers_become_z_type() {
        let ks = cluster(6);
        let (c, q) = diagonalize_commuting_set(&ks).unwrap();
        for (k, qi) in ks.iter().zip(&q) {
            assert!(qi.is_z_type());
            assert_eq!(&c.conjugate_pauli(k, Direction::Inverse), qi);
        }
    }

    #[test]
    fn dependent_signed_copy() {
        let (_, q) = diagonalize_commuting_set(&[p("Z"), p("-Z")]).unwrap();
        assert_eq!(q, vec![p("Z"), p("-Z")]);
    }

    #[test]
    fn diagonalize_errors() {
        assert!(matches!(diagonalize_commuting_set(&[p("X"), p("iX")]), Err(Error::NotHermitian(1))));
        assert!(matches!(diagonalize_commuting_set(&[p("XI"), p("ZZ")]), Err(Error::NotCommuting(0, 1))));
    }

    #[test]
    fn completion() {
        let s = complete_generators(3, &[]).unwrap();
        assert!(s.same_group(&StabilizerState::zero(3)));
        let zs: Vec<_> = (0..3).map(|q| PauliOperator::single_z(3, q)).collect();
        assert!(complete_generators(3, &zs).unwrap().same_group(&StabilizerState::zero(3)));
        let s = complete_generators(2, &[p("XX")]).unwrap();
        assert_eq!(s.generators()[0], p("XX"));
        assert!(s.group_contains(&p("XX")));
        assert!(matches!(complete_generators(1, &[p("-I")]), Err(Error::MinusIdentity)));
        assert!(matches!(complete_generators(2, &[p("ZI"), p("-ZI")]), Err(Error::MinusIdentity)));
        assert!(matches!(complete_generators(2, &[p("XX"), p("XX")]), Err(Error::DependentInput(1))));
    }

    #[test]
    fn prep_reproduces_group() {
        let s = StabilizerState::from_generators(cluster(5)).unwrap();
        let c = synthesize_prep(&s);
        assert!(StabilizerState::evolve(&BitString::zeros(5), &c).same_group(&s));
        assert!(synthesize_prep(&StabilizerState::zero(3)).is_empty());
    }
}
