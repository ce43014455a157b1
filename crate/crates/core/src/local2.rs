//! Strong simulation of 2-local commuting qudit circuits on product inputs.
//!
//! For a commuting circuit `C`, a product input `|α⟩` and an observable `O`
//! on a small pivot block `B`, the value `⟨α|C†OC|α⟩` is contracted one
//! partner qudit at a time. Gates that miss `B` commute past `O` and cancel.
//! Every remaining gate acts on `B` alone or on `B` and a single partner
//! `j`, so after grouping we can write `C = U_B · Π_j U_j` and use
//!
//! ```text
//! O ← U_B† O U_B
//! O ← ⟨α_j| U_j† (O ⊗ I) U_j |α_j⟩     for each partner j
//! value = ⟨α_B| O |α_B⟩
//! ```
//!
//! Each partner step costs `O(d^{3(|B|+1)})`, so `O(n d⁶)` for a
//! single-qudit observable.
//!
//! ## Gates that commute up to a phase
//!
//! If instead `G_i G_j = γ_ij G_j G_i` with `|γ_ij| = 1`, reordering the
//! gate list into the grouped form above only changes `C` by a product of
//! the `γ_ij`, that is `C' = γ C` with `|γ| = 1`. Since `C'† O C' = C† O C`
//! the same contraction is exact. The declared phases are checked on dense
//! gate pairs before use.

use std::collections::BTreeMap;

use crate::circuit::{Circuit, Gate};
use crate::error::Error;
use crate::linalg::{embed, frobenius, hermiticity_defect, pow_usize, CMatrix, C64, ONE, ZERO};
use crate::oracle::{Observable, OracleConfig, StateVector};

/// Largest observable support handled as a pivot block.
pub const MAX_BLOCK: usize = 3;

/// Tolerance for verifying declared commutation phases.
pub const PHASE_TOL: f64 = 1e-9;

/// `|α_1⟩ ⊗ … ⊗ |α_n⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    d: usize,
    factors: Vec<Vec<C64>>,
}

impl ProductState {
    pub fn new(factors: Vec<Vec<C64>>, d: usize) -> Result<ProductState, Error> {
        for (i, f) in factors.iter().enumerate() {
            if f.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "factor {} has length {}, expected {d}",
                    i + 1,
                    f.len()
                )));
            }
            let norm: f64 = f.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidConfig(format!(
                    "factor {} has norm {norm}",
                    i + 1
                )));
            }
        }
        Ok(ProductState { d, factors })
    }

    pub fn basis(digits: &[usize], d: usize) -> Result<ProductState, Error> {
        let factors = digits
            .iter()
            .map(|&v| {
                if v >= d {
                    return Err(Error::DimensionMismatch(format!("digit {v} for d = {d}")));
                }
                let mut f = vec![ZERO; d];
                f[v] = ONE;
                Ok(f)
            })
            .collect::<Result<_, _>>()?;
        Ok(ProductState { d, factors })
    }

    pub fn num_qudits(&self) -> usize {
        self.factors.len()
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn factor(&self, i: usize) -> &[C64] {
        &self.factors[i]
    }

    pub fn to_state_vector(&self, cfg: &OracleConfig) -> Result<StateVector, Error> {
        StateVector::product(&self.factors, self.d, cfg)
    }
}

/// Keeps the gates whose support contains `pivot`, after checking that the
/// circuit commutes. Expectations of observables on `pivot` are unchanged.
pub fn strip_disjoint_gates(c: &Circuit, pivot: usize) -> Result<Circuit, Error> {
    c.check_commuting()?;
    let mut out = Circuit::new(c.num_qudits(), c.dim())?;
    for g in c.gates().iter().filter(|g| g.support().contains(&pivot)) {
        out.push_unchecked(g.clone());
    }
    Ok(out)
}

/// Intermediate state of the qudit-by-qudit contraction.
#[derive(Clone, Debug)]
pub struct ContractionState {
    d: usize,
    block: Vec<usize>,
    obs: CMatrix,
    internal: Option<CMatrix>,
    /// Partner qudit and the product of its gates on `block ++ [partner]`.
    partners: Vec<(usize, CMatrix)>,
    next: usize,
    input: ProductState,
}

impl ContractionState {
    /// Groups the gates of `c` by partner qudit. Does not check
    /// commutation; see [`simulate_2local`].
    pub fn new(c: &Circuit, input: &ProductState, obs: &Observable) -> Result<ContractionState, Error> {
        let d = c.dim();
        let n = c.num_qudits();
        if input.num_qudits() != n || input.dim() != d {
            return Err(Error::DimensionMismatch(format!(
                "input has {} qudits of dimension {}, circuit has {n} of dimension {d}",
                input.num_qudits(),
                input.dim()
            )));
        }
        let block = obs.support().to_vec();
        if block.is_empty() || block.len() > MAX_BLOCK {
            return Err(Error::InvalidConfig(format!(
                "observable acts on {} qudits; supported block sizes are 1..={MAX_BLOCK}",
                block.len()
            )));
        }
        if block.iter().any(|&q| q >= n) || pow_usize(d, block.len()) != Some(obs.matrix().nrows()) {
            return Err(Error::DimensionMismatch("observable does not fit the register".into()));
        }
        c.check_locality(2)?;
        let bdim = obs.matrix().nrows();
        let mut internal: Option<CMatrix> = None;
        let mut groups: BTreeMap<usize, CMatrix> = BTreeMap::new();
        for g in c.gates() {
            let wires = g.wires();
            let outside: Vec<usize> = wires.iter().copied().filter(|q| !block.contains(q)).collect();
            if outside.len() == wires.len() {
                continue;
            }
            let local = g.local_matrix();
            match outside.as_slice() {
                [] => {
                    let m = embed(&local, &wires, &block, d);
                    let acc = internal.take().unwrap_or_else(|| CMatrix::identity(bdim, bdim));
                    internal = Some(m * acc);
                }
                [j] => {
                    let mut reg = block.clone();
                    reg.push(*j);
                    let m = embed(&local, &wires, &reg, d);
                    let entry = groups
                        .entry(*j)
                        .or_insert_with(|| CMatrix::identity(bdim * d, bdim * d));
                    *entry = m * &*entry;
                }
                _ => unreachable!("2-local gate has at most one partner"),
            }
        }
        Ok(ContractionState {
            d,
            block,
            obs: obs.matrix().clone(),
            internal,
            partners: groups.into_iter().collect(),
            next: 0,
            input: input.clone(),
        })
    }

    /// Current effective observable on the pivot block.
    pub fn observable(&self) -> &CMatrix {
        &self.obs
    }

    /// Partner qudits not yet traced out.
    pub fn remaining(&self) -> Vec<usize> {
        self.partners[self.next..].iter().map(|(j, _)| *j).collect()
    }

    /// Performs one contraction step; false once everything is traced out.
    pub fn step(&mut self) -> bool {
        if let Some(u) = self.internal.take() {
            self.obs = u.adjoint() * &self.obs * &u;
            return true;
        }
        let Some((j, u)) = self.partners.get(self.next) else {
            return false;
        };
        let d = self.d;
        let bdim = self.obs.nrows();
        let lifted = self.obs.kronecker(&CMatrix::identity(d, d));
        let m = u.adjoint() * lifted * u;
        let alpha = &self.input.factors[*j];
        let mut out = CMatrix::zeros(bdim, bdim);
        for r in 0..bdim {
            for c in 0..bdim {
                let mut acc = ZERO;
                for (a, au) in alpha.iter().enumerate() {
                    for (b, bv) in alpha.iter().enumerate() {
                        acc += au.conj() * bv * m[(r * d + a, c * d + b)];
                    }
                }
                out[(r, c)] = acc;
            }
        }
        self.obs = out;
        self.next += 1;
        true
    }

    /// Runs the remaining steps and evaluates `⟨α_B|O|α_B⟩`.
    pub fn finish(mut self) -> f64 {
        while self.step() {}
        let mut v = vec![ONE];
        for &q in &self.block {
            v = v
                .iter()
                .flat_map(|a| self.input.factors[q].iter().map(move |b| a * b))
                .collect();
        }
        let mut acc = ZERO;
        for (r, vr) in v.iter().enumerate() {
            for (c, vc) in v.iter().enumerate() {
                acc += vr.conj() * self.obs[(r, c)] * vc;
            }
        }
        acc.re
    }
}

/// `⟨α|C†OC|α⟩` for a 2-local commuting circuit.
pub fn simulate_2local(c: &Circuit, input: &ProductState, obs: &Observable) -> Result<f64, Error> {
    c.check_locality(2)?;
    c.check_commuting()?;
    Ok(ContractionState::new(c, input, obs)?.finish())
}

/// Like [`simulate_2local`] for gates with `G_i G_j = γ_ij G_j G_i`. The
/// declared `phases` (an `m × m` matrix for `m` gates) are verified first.
pub fn simulate_2local_phase_commuting(
    c: &Circuit,
    phases: &[Vec<C64>],
    input: &ProductState,
    obs: &Observable,
) -> Result<f64, Error> {
    c.check_locality(2)?;
    verify_phases(c, phases)?;
    Ok(ContractionState::new(c, input, obs)?.finish())
}

/// Checks `G_i G_j = γ_ij G_j G_i` for every pair within [`PHASE_TOL`].
pub fn verify_phases(c: &Circuit, phases: &[Vec<C64>]) -> Result<(), Error> {
    let m = c.len();
    if phases.len() != m || phases.iter().any(|row| row.len() != m) {
        return Err(Error::DimensionMismatch(format!("phase matrix must be {m}x{m}")));
    }
    let gates = c.gates();
    for i in 0..m {
        if (phases[i][i] - ONE).norm() > PHASE_TOL {
            return Err(Error::PhaseMismatch(i, i));
        }
        for j in i + 1..m {
            let g = phases[i][j];
            if (g.norm() - 1.0).abs() > PHASE_TOL || (phases[j][i] - g.conj()).norm() > PHASE_TOL {
                return Err(Error::PhaseMismatch(i, j));
            }
            if phase_defect(&gates[i], &gates[j], g, c.dim()) > PHASE_TOL {
                return Err(Error::PhaseMismatch(i, j));
            }
        }
    }
    Ok(())
}

fn phase_defect(a: &Gate, b: &Gate, gamma: C64, d: usize) -> f64 {
    let sa = a.support();
    if b.support().iter().all(|q| !sa.contains(q)) {
        return (gamma - ONE).norm();
    }
    let mut reg = sa;
    reg.extend(b.support());
    reg.sort_unstable();
    reg.dedup();
    let ma = embed(&a.local_matrix(), &a.wires(), &reg, d);
    let mb = embed(&b.local_matrix(), &b.wires(), &reg, d);
    frobenius(&(&ma * &mb - (&mb * &ma) * gamma))
}

/// Hermiticity defect of every intermediate observable, for diagnostics.
pub fn contraction_hermiticity(c: &Circuit, input: &ProductState, obs: &Observable) -> Result<Vec<f64>, Error> {
    let mut st = ContractionState::new(c, input, obs)?;
    let mut out = vec![hermiticity_defect(st.observable())];
    while st.step() {
        out.push(hermiticity_defect(st.observable()));
    }
    Ok(out)
}
