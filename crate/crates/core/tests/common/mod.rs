//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use commsim::circuit::CliffordGate;
use commsim::linalg::{CMatrix, C64, ONE, ZERO};
use commsim::oracle::{Observable, OracleConfig, StateVector};
use commsim::stabilizer::{CliffordCircuit, Direction};
use commsim::{BitString, Circuit, Gate, PauliOperator};
use nalgebra::linalg::QR;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random `dim × dim` unitary (QR of a Ginibre matrix, phases fixed).
pub fn haar_unitary<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    let qr = QR::new(g);
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..dim {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(rng));
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}

/// `exp(iθH)` for a random Hermitian `H` with unit-ish spectrum.
pub fn near_identity<R: Rng>(dim: usize, theta: f64, rng: &mut R) -> CMatrix {
    let h = random_hermitian(dim, rng);
    let eig = h.symmetric_eigen();
    let v = eig.eigenvectors;
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        eig.eigenvalues.iter().map(|l| C64::from_polar(1.0, theta * l)),
    ));
    &v * d * v.adjoint()
}

pub fn random_diagonal<R: Rng>(dim: usize, rng: &mut R) -> CMatrix {
    let phases: Vec<C64> = (0..dim)
        .map(|_| C64::from_polar(1.0, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)))
        .collect();
    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(phases))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Up to two distinct sorted qudits.
pub fn random_support<R: Rng>(n: usize, max: usize, rng: &mut R) -> Vec<usize> {
    let k = rng.random_range(1..=max.min(n));
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    let mut s = all[..k].to_vec();
    s.sort_unstable();
    s
}

/// Commuting 2-local gates `U^{⊗k} D U†^{⊗k}` sharing one local basis `U`.
pub fn shared_basis_circuit<R: Rng>(n: usize, d: usize, m: usize, rng: &mut R) -> Circuit {
    let u = haar_unitary(d, rng);
    let mut c = Circuit::new(n, d).unwrap();
    for _ in 0..m {
        let s = random_support(n, 2, rng);
        let uk = if s.len() == 2 { kron(&u, &u) } else { u.clone() };
        let dim = uk.nrows();
        let g = &uk * random_diagonal(dim, rng) * uk.adjoint();
        c.push(Gate::dense(s, g)).unwrap();
    }
    c
}

/// Weight ≤ `max` Pauli with random letters on a random support.
pub fn random_local_pauli<R: Rng>(n: usize, max: usize, rng: &mut R) -> PauliOperator {
    let s = random_support(n, max, rng);
    let mut x = BitString::zeros(n);
    let mut z = BitString::zeros(n);
    for q in s {
        match rng.random_range(0..3) {
            0 => x.set(q, true),
            1 => z.set(q, true),
            _ => {
                x.set(q, true);
                z.set(q, true)
            }
        }
    }
    hermitian(x, z, rng.random())
}

/// `±X^x Z^z` made Hermitian.
pub fn hermitian(x: BitString, z: BitString, negative: bool) -> PauliOperator {
    let y = x.and_count(&z) as u8;
    let p = PauliOperator::from_parts(y % 4, x, z);
    if negative {
        p.negated()
    } else {
        p
    }
}

/// Greedily picks up to `m` pairwise commuting 2-local Paulis.
pub fn commuting_local_paulis<R: Rng>(n: usize, m: usize, rng: &mut R) -> Vec<PauliOperator> {
    let mut out: Vec<PauliOperator> = Vec::new();
    for _ in 0..50 * m {
        if out.len() == m {
            break;
        }
        let p = random_local_pauli(n, 2, rng);
        if out.iter().all(|q| q.commutes(&p).unwrap()) {
            out.push(p);
        }
    }
    out
}

pub fn random_clifford<R: Rng>(n: usize, size: usize, rng: &mut R) -> CliffordCircuit {
    let mut c = CliffordCircuit::new(n);
    for _ in 0..size {
        let a = rng.random_range(0..n);
        let g = if n == 1 || rng.random_bool(0.5) {
            match rng.random_range(0..2) {
                0 => CliffordGate::H(a),
                _ => CliffordGate::S(a),
            }
        } else {
            let mut b = rng.random_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            if rng.random_bool(0.5) {
                CliffordGate::Cnot { control: a, target: b }
            } else {
                CliffordGate::Cz(a, b)
            }
        };
        c.push(g).unwrap();
    }
    c
}

/// `m` commuting Hermitian Paulis `C Q_i C†` for random Z-type `Q_i` and a
/// random Clifford `C`; generically nonlocal.
pub fn commuting_paulis<R: Rng>(n: usize, m: usize, rng: &mut R) -> Vec<PauliOperator> {
    let c = random_clifford(n, 3 * n * n.max(2), rng);
    (0..m)
        .map(|_| {
            let mut z = BitString::zeros(n);
            while z.is_zero() {
                z = BitString::from_bools((0..n).map(|_| rng.random_bool(0.5)));
            }
            let q = hermitian(BitString::zeros(n), z, rng.random());
            c.conjugate_pauli(&q, Direction::Forward)
        })
        .collect()
}

pub fn random_bits<R: Rng>(n: usize, rng: &mut R) -> BitString {
    BitString::from_bools((0..n).map(|_| rng.random_bool(0.5)))
}

pub fn random_product<R: Rng>(n: usize, d: usize, rng: &mut R) -> Vec<Vec<C64>> {
    (0..n)
        .map(|_| {
            let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
            let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|a| a / norm).collect()
        })
        .collect()
}

pub fn random_observable<R: Rng>(n: usize, d: usize, rng: &mut R) -> Observable {
    let s = random_support(n, 2, rng);
    let dim = d.pow(s.len() as u32);
    Observable::new(s, random_hermitian(dim, rng)).unwrap()
}

/// Dense `⟨x|U†Z_qU|x⟩` for a circuit of Pauli exponentials.
pub fn oracle_pauli_z(gates: &[(f64, PauliOperator)], x: &BitString, q: usize) -> f64 {
    let cfg = OracleConfig::default();
    let mut s = StateVector::from_bits(x, &cfg).unwrap();
    for (t, p) in gates {
        s.apply_gate(&Gate::pauli_exp(*t, p.clone())).unwrap();
    }
    s.expectation(&Observable::z(q)).unwrap()
}

pub fn zero_amplitude(c: &Circuit) -> C64 {
    commsim::oracle::run_from_zero(c, &OracleConfig::default()).unwrap().amplitudes()[0]
}

/// Brickwork of depth ≤ 2: random pairings per layer, near-identity gates.
pub fn depth_two_circuit<R: Rng>(n: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::qubits(n);
    let layers = rng.random_range(1..=2);
    for l in 0..layers {
        if l > 0 {
            c.push_layer_break();
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut i = 0;
        while i < n {
            if i + 1 < n && rng.random_bool(0.8) {
                let mut w = vec![order[i], order[i + 1]];
                w.sort_unstable();
                let theta = rng.random_range(0.1..1.2);
                c.push(Gate::dense(w, near_identity(4, theta, rng))).unwrap();
                i += 2;
            } else {
                let theta = rng.random_range(0.1..1.2);
                c.push(Gate::dense(vec![order[i]], near_identity(2, theta, rng))).unwrap();
                i += 1;
            }
        }
    }
    c
}

/// Dense Weyl operator `X^a Z^b` on one qudit.
pub fn weyl(d: usize, a: usize, b: usize) -> CMatrix {
    let w = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / d as f64);
    let mut m = CMatrix::from_element(d, d, ZERO);
    for j in 0..d {
        // X^a Z^b |j⟩ = ω^{bj} |j + a⟩
        m[((j + a) % d, j)] = w.powu((b * j) as u32);
    }
    m
}
