use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Gate;
use crate::linalg::{pow_usize, LocalPlan, C64, ZERO};

/// Frobenius tolerance for commutation checks.
pub const COMMUTE_TOL: f64 = 1e-10;

fn union_support(g1: &Gate, g2: &Gate) -> Vec<usize> {
    let mut u = g1.support();
    u.extend(g2.support());
    u.sort_unstable();
    u.dedup();
    u
}

fn positions_in(wires: &[usize], register: &[usize]) -> Vec<usize> {
    wires
        .iter()
        .map(|w| register.iter().position(|r| r == w).unwrap())
        .collect()
}

fn disjoint(g1: &Gate, g2: &Gate) -> bool {
    let s2 = g2.support();
    g1.support().iter().all(|q| !s2.contains(q))
}

/// Frobenius norm of `[g1, g2]` embedded on the union of their supports.
pub fn commutator_norm(g1: &Gate, g2: &Gate, d: usize) -> f64 {
    if disjoint(g1, g2) {
        return 0.0;
    }
    if let (Gate::PauliExp { theta: t1, pauli: p1 }, Gate::PauliExp { theta: t2, pauli: p2 }) = (g1, g2) {
        if p1.commutes_unchecked(p2) {
            return 0.0;
        }
        // [c + isP, c' + is'Q] = -2ss'PQ for anticommuting P, Q
        let k = union_support(g1, g2).len() as i32;
        return 2.0 * (t1.sin() * t2.sin()).abs() * 2f64.powi(k).sqrt();
    }
    let reg = union_support(g1, g2);
    let n = reg.len();
    let dim = pow_usize(d, n).expect("union register too large");
    let a = LocalPlan::new(n, d, &positions_in(&g1.wires(), &reg), &g1.local_matrix());
    let b = LocalPlan::new(n, d, &positions_in(&g2.wires(), &reg), &g2.local_matrix());
    let mut ab = vec![ZERO; dim];
    let mut ba = vec![ZERO; dim];
    let mut total = 0.0;
    for c in 0..dim {
        ab.iter_mut().for_each(|z| *z = ZERO);
        ba.iter_mut().for_each(|z| *z = ZERO);
        ab[c] = C64::new(1.0, 0.0);
        ba[c] = C64::new(1.0, 0.0);
        b.apply(&mut ab);
        a.apply(&mut ab);
        a.apply(&mut ba);
        b.apply(&mut ba);
        total += ab.iter().zip(&ba).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>();
    }
    total.sqrt()
}

/// True iff the two gates commute within [`COMMUTE_TOL`]. Disjoint supports
/// return immediately.
pub fn is_commuting_pair(g1: &Gate, g2: &Gate, d: usize) -> bool {
    commutator_norm(g1, g2, d) <= COMMUTE_TOL
}

/// Largest `‖[g1, g2] v‖` over a few seeded random unit vectors on the union
/// support. Zero for commuting gates; non-zero with probability one
/// otherwise. Costs `O(probes · D · (d_1 + d_2))` instead of `O(D²)`.
pub fn commutator_probe(g1: &Gate, g2: &Gate, d: usize, probes: usize, seed: u64) -> f64 {
    if disjoint(g1, g2) {
        return 0.0;
    }
    let reg = union_support(g1, g2);
    let n = reg.len();
    let dim = pow_usize(d, n).expect("union register too large");
    let a = LocalPlan::new(n, d, &positions_in(&g1.wires(), &reg), &g1.local_matrix());
    let b = LocalPlan::new(n, d, &positions_in(&g2.wires(), &reg), &g2.local_matrix());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..probes {
        let mut v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        let mut ab = v.clone();
        b.apply(&mut ab);
        a.apply(&mut ab);
        let mut ba = v;
        a.apply(&mut ba);
        b.apply(&mut ba);
        let r = ab
            .iter()
            .zip(&ba)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(r);
    }
    worst
}
