use rand::Rng;

use super::clifford::{CliffordCircuit, Direction};
use super::gf2;
use crate::bits::BitString;
use crate::error::Error;
use crate::linalg::{i_pow, C64, ZERO};
use crate::pauli::PauliOperator;

/// A stabilizer state given by `n` independent, commuting Hermitian
/// generators.
///
/// Internally the state is kept in affine form: its support is the coset
/// `y₀ ⊕ span{a_1..a_r}` of the X-parts, and every amplitude is
/// `2^{-r/2} · i^k` for an exactly computed `k ∈ Z₄`. The global phase is
/// fixed by making `⟨y₀|ψ⟩` real and positive, where `y₀` is the
/// lexicographically least support element (qubit 0 most significant).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerState {
    n: usize,
    generators: Vec<PauliOperator>,
    y0: BitString,
    /// Generator products in reduced row echelon form on their X-parts.
    x_rows: Vec<PauliOperator>,
    /// Leading X position of each row of `x_rows`.
    pivots: Vec<usize>,
}

impl StabilizerState {
    /// Validates the generators: Hermitian, pairwise commuting, independent
    /// and `n` of them on `n` qubits.
    pub fn from_generators(generators: Vec<PauliOperator>) -> Result<StabilizerState, Error> {
        let n = generators.len();
        for (i, g) in generators.iter().enumerate() {
            if g.num_qubits() != n {
                return Err(Error::SizeMismatch(g.num_qubits(), n));
            }
            if !g.is_hermitian() {
                return Err(Error::NotHermitian(i));
            }
        }
        check_commuting(&generators)?;
        if let Some(i) = gf2::first_dependent(&generators) {
            return Err(Error::DependentInput(i));
        }
        Ok(Self::from_generators_unchecked(generators))
    }

    pub(crate) fn from_generators_unchecked(generators: Vec<PauliOperator>) -> StabilizerState {
        let n = generators.len();
        let mut rows = generators.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..n {
            let Some(i) = (r..n).find(|&i| rows[i].x_part().get(col)) else {
                continue;
            };
            rows.swap(r, i);
            let pivot = rows[r].clone();
            for (j, row) in rows.iter_mut().enumerate() {
                if j != r && row.x_part().get(col) {
                    row.mul_assign_right(&pivot);
                }
            }
            pivots.push(col);
            r += 1;
        }
        let z_rows = rows.split_off(r);
        // Z^b ψ = ψ on the support means b·y = t/2 (mod 2)
        let eqs: Vec<(BitString, bool)> = z_rows
            .iter()
            .map(|g| (g.z_part().clone(), g.phase() == 2))
            .collect();
        let mut y0 = gf2::solve(&eqs, n).expect("stabilizer constraints are consistent");
        for (row, &p) in rows.iter().zip(&pivots) {
            if y0.get(p) {
                y0.xor_assign(row.x_part());
            }
        }
        StabilizerState {
            n,
            generators,
            y0,
            x_rows: rows,
            pivots,
        }
    }

    /// `|0…0⟩`.
    pub fn zero(n: usize) -> StabilizerState {
        Self::from_generators_unchecked((0..n).map(|q| PauliOperator::single_z(n, q)).collect())
    }

    /// The state `C|x⟩`, up to the global phase convention above.
    pub fn evolve(x: &BitString, c: &CliffordCircuit) -> StabilizerState {
        let n = c.num_qubits();
        assert_eq!(x.len(), n, "basis string and circuit sizes differ");
        let gens = (0..n)
            .map(|q| {
                let z = PauliOperator::single_z(n, q);
                let signed = if x.get(q) { z.negated() } else { z };
                c.conjugate_pauli(&signed, Direction::Forward)
            })
            .collect();
        Self::from_generators_unchecked(gens)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    /// Dimension `r` of the support subspace; `|⟨y|ψ⟩|² = 2^{-r}` on it.
    pub fn support_dim(&self) -> usize {
        self.x_rows.len()
    }

    /// Lexicographically least basis state in the support.
    pub fn anchor(&self) -> &BitString {
        &self.y0
    }

    /// `⟨y|ψ⟩ = 2^{-r/2} i^k`; returns `k`, or `None` outside the support.
    pub fn amplitude_exact(&self, y: &BitString) -> Option<u8> {
        let mut scratch = BitString::zeros(self.n);
        self.amplitude_exact_in(y, &mut scratch)
    }

    /// [`StabilizerState::amplitude_exact`] using `scratch` as work space.
    pub fn amplitude_exact_in(&self, y: &BitString, scratch: &mut BitString) -> Option<u8> {
        scratch.clone_from(&self.y0);
        let cur = scratch;
        let mut phase = 0u32;
        for (row, &p) in self.x_rows.iter().zip(&self.pivots) {
            if cur.get(p) != y.get(p) {
                // ⟨y ⊕ a|ψ⟩ = i^t (-1)^{b·y} ⟨y|ψ⟩
                phase += row.phase() as u32 + 2 * row.z_part().and_count(cur);
                cur.xor_assign(row.x_part());
            }
        }
        (*cur == *y).then_some((phase % 4) as u8)
    }

    /// `⟨y|ψ⟩`.
    pub fn amplitude(&self, y: &BitString) -> C64 {
        match self.amplitude_exact(y) {
            Some(k) => i_pow(k) * self.modulus(),
            None => ZERO,
        }
    }

    /// `2^{-r/2}`, the modulus of every nonzero amplitude.
    pub fn modulus(&self) -> f64 {
        0.5f64.powf(self.x_rows.len() as f64 / 2.0)
    }

    /// Draws `y` with probability `|⟨y|ψ⟩|²`. The support is uniform over
    /// an affine subspace, so a uniformly random combination of the
    /// X-parts is an exact Born-rule sample.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> BitString {
        let mut y = self.y0.clone();
        self.sample_into(rng, &mut y);
        y
    }

    /// [`StabilizerState::sample`] writing into an existing buffer.
    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, y: &mut BitString) {
        y.clone_from(&self.y0);
        let mut bits = 0u64;
        for (k, row) in self.x_rows.iter().enumerate() {
            if k % 64 == 0 {
                bits = rng.random();
            }
            if (bits >> (k % 64)) & 1 == 1 {
                y.xor_assign(row.x_part());
            }
        }
    }

    /// True iff `p` (with its sign) lies in the stabilizer group.
    pub fn group_contains(&self, p: &PauliOperator) -> bool {
        if p.num_qubits() != self.n || !self.generators.iter().all(|g| g.commutes_unchecked(p)) {
            return false;
        }
        // p ψ = λ ψ; compare one support component
        let act = p.act_on_basis(&self.y0);
        match self.amplitude_exact(&act.state) {
            Some(k) => act.phase % 4 == k,
            None => false,
        }
    }

    /// Both states have the same stabilizer group.
    pub fn same_group(&self, other: &StabilizerState) -> bool {
        self.n == other.n && other.generators.iter().all(|g| self.group_contains(g))
    }

    /// Dense amplitudes in big-endian order, for small `n`.
    pub fn to_amplitudes(&self) -> Vec<C64> {
        assert!(self.n < 31, "too many qubits for a dense vector");
        (0..1usize << self.n)
            .map(|i| self.amplitude(&BitString::from_index(i, self.n)))
            .collect()
    }
}

pub(crate) fn check_commuting(ps: &[PauliOperator]) -> Result<(), Error> {
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            if !ps[i].commutes_unchecked(&ps[j]) {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    Ok(())
}
