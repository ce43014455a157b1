use std::time::Instant;

use super::monomial::{DiagonalProduct, DiagonalZExp, PauliSandwich};
use super::sampler::estimate_real_part;
use super::{hoeffding_samples, EstimateResult, EstimatorConfig};
use crate::bits::BitString;
use crate::circuit::{Circuit, Gate};
use crate::error::Error;
use crate::linalg::{i_pow, C64};
use crate::pauli::PauliOperator;
use crate::stabilizer::{diagonalize_commuting_set, CliffordCircuit, Direction, StabilizerState};

/// Default cap on the number of non-commuting extra gates.
pub const DEFAULT_MAX_EXTRAS: usize = 10;

/// A commuting Pauli circuit `U = C D C†` with `D = Π_j e^{iθ_j Q_j}`.
#[derive(Clone, Debug)]
pub struct CommutingCompilation {
    pub clifford: CliffordCircuit,
    pub diag: Vec<DiagonalZExp>,
}

impl CommutingCompilation {
    /// `C† A C`.
    pub fn obs_map(&self, a: &PauliOperator) -> PauliOperator {
        self.clifford.conjugate_pauli(a, Direction::Inverse)
    }
}

/// Diagonalizes the gates `e^{iθ_j P_j}` of a commuting Pauli circuit on `n`
/// qubits.
pub fn compile_commuting_pauli(n: usize, gates: &[(f64, PauliOperator)]) -> Result<CommutingCompilation, Error> {
    if let Some((_, p)) = gates.iter().find(|(_, p)| p.num_qubits() != n) {
        return Err(Error::SizeMismatch(n, p.num_qubits()));
    }
    if gates.is_empty() {
        return Ok(CommutingCompilation {
            clifford: CliffordCircuit::new(n),
            diag: Vec::new(),
        });
    }
    let ps: Vec<PauliOperator> = gates.iter().map(|(_, p)| p.clone()).collect();
    let (clifford, qs) = diagonalize_commuting_set(&ps)?;
    let diag = gates
        .iter()
        .zip(qs)
        .map(|((theta, _), q)| DiagonalZExp::new(*theta, q))
        .collect();
    Ok(CommutingCompilation { clifford, diag })
}

/// The `(θ, P)` list of a circuit made only of `exppauli` gates.
pub fn pauli_gates(c: &Circuit) -> Result<Vec<(f64, PauliOperator)>, Error> {
    c.gates()
        .iter()
        .enumerate()
        .map(|(i, g)| match g {
            Gate::PauliExp { theta, pauli } => Ok((*theta, pauli.clone())),
            _ => Err(Error::InvalidCircuit(format!(
                "gate {} is not a Pauli exponential",
                i + 1
            ))),
        })
        .collect()
}

/// Estimates `⟨x|U†Z_iU|x⟩` for a commuting Pauli circuit.
pub fn simulate_commuting_pauli(
    n: usize,
    gates: &[(f64, PauliOperator)],
    x: &BitString,
    qubit: usize,
    cfg: &EstimatorConfig,
) -> Result<EstimateResult, Error> {
    let items: Vec<PauliItem> = gates
        .iter()
        .map(|(t, p)| PauliItem::Member(*t, p.clone()))
        .collect();
    simulate_noncommuting_pauli(n, &items, x, qubit, cfg, 0)
}

/// One gate of a slightly non-commuting Pauli circuit.
#[derive(Clone, Debug, PartialEq)]
pub enum PauliItem {
    /// `e^{iθP}`, part of the commuting family.
    Member(f64, PauliOperator),
    /// `e^{iφQ}`, arbitrary Hermitian `Q`.
    Extra(f64, PauliOperator),
}

struct Branch {
    coeff: C64,
    /// `Σ|x⟩ = i^phase |u⟩`
    phase: u8,
    u: BitString,
    /// Member angles with the sign flips of this branch.
    diag: DiagonalProduct,
}

/// Estimates `⟨x|U†Z_iU|x⟩` where `U` interleaves commuting members with up
/// to `max_extras` arbitrary Pauli exponentials (0 means the default cap).
///
/// Each extra gate is expanded as `cos φ I + i sin φ Q`, and every chosen
/// `Q` is moved to the input side, flipping the sign of each earlier member
/// it anticommutes with. This writes `U = Σ_α a_α C D_α C† Σ_α` with one
/// diagonalizing Clifford `C`. The pair terms
/// `T_αβ = ⟨x|Σ_α† C D_α† C† Z_i C D_β C† Σ_β|x⟩` are sandwiches
/// `⟨ψ|D_α† P' D_β R|ψ⟩` with `ψ = C†|u_α⟩`, `P' = C†Z_iC` and
/// `R = C† X^{u_α⊕u_β} C`. Only `α ≤ β` is estimated, using
/// `T_βα = conj(T_αβ)`, and each term gets accuracy `ε/(Σ|a_α|)²` and
/// failure probability `δ/#terms`.
pub fn simulate_noncommuting_pauli(
    n: usize,
    items: &[PauliItem],
    x: &BitString,
    qubit: usize,
    cfg: &EstimatorConfig,
    max_extras: usize,
) -> Result<EstimateResult, Error> {
    let start = Instant::now();
    cfg.validate()?;
    if x.len() != n {
        return Err(Error::DimensionMismatch(format!("input of length {} for {n} qubits", x.len())));
    }
    if qubit >= n {
        return Err(Error::DimensionMismatch(format!("qubit {} out of range 1..={n}", qubit + 1)));
    }
    let limit = if max_extras == 0 { DEFAULT_MAX_EXTRAS } else { max_extras };
    let mut members: Vec<(usize, f64, PauliOperator)> = Vec::new();
    let mut extras: Vec<(usize, f64, PauliOperator)> = Vec::new();
    for (pos, item) in items.iter().enumerate() {
        let (list, theta, p) = match item {
            PauliItem::Member(t, p) => (&mut members, t, p),
            PauliItem::Extra(t, p) => (&mut extras, t, p),
        };
        if p.num_qubits() != n {
            return Err(Error::SizeMismatch(n, p.num_qubits()));
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(pos));
        }
        list.push((pos, *theta, p.clone()));
    }
    if extras.len() > limit {
        return Err(Error::TooManyExtras {
            found: extras.len(),
            limit,
        });
    }
    let gates: Vec<(f64, PauliOperator)> = members.iter().map(|(_, t, p)| (*t, p.clone())).collect();
    let comp = compile_commuting_pauli(n, &gates).map_err(|e| match e {
        Error::NotCommuting(i, j) => Error::NotCommuting(members[i].0, members[j].0),
        Error::NotHermitian(i) => Error::NotHermitian(members[i].0),
        other => other,
    })?;
    let cinv = comp.clifford.inverse();
    let p_obs = comp.obs_map(&PauliOperator::single_z(n, qubit));

    let k = extras.len();
    let branches: Vec<Branch> = (0..1usize << k)
        .map(|alpha| {
            let mut coeff = C64::new(1.0, 0.0);
            let mut sigma = PauliOperator::identity(n);
            for (l, (_, phi, q)) in extras.iter().enumerate() {
                if alpha >> l & 1 == 1 {
                    coeff *= C64::new(0.0, phi.sin());
                    // later extras multiply from the left
                    sigma = q.mul_unchecked(&sigma);
                } else {
                    coeff *= phi.cos();
                }
            }
            let signed: Vec<DiagonalZExp> = members
                .iter()
                .zip(&comp.diag)
                .map(|((pos, _, p), d)| {
                    let flips = extras
                        .iter()
                        .enumerate()
                        .filter(|(l, (qpos, _, q))| alpha >> l & 1 == 1 && qpos > pos && !q.commutes_unchecked(p))
                        .count();
                    if flips % 2 == 1 {
                        d.adjoint()
                    } else {
                        d.clone()
                    }
                })
                .collect();
            let act = sigma.act_on_basis(x);
            Branch {
                coeff,
                phase: act.phase,
                u: act.state,
                diag: DiagonalProduct::new(n, &signed),
            }
        })
        .collect();

    let mut pairs = Vec::new();
    for a in 0..branches.len() {
        for b in a..branches.len() {
            let w = branches[a].coeff.norm() * branches[b].coeff.norm();
            if w > 0.0 {
                pairs.push((a, b));
            }
        }
    }
    let total_weight: f64 = branches.iter().map(|b| b.coeff.norm()).sum::<f64>().powi(2);
    let eps_term = cfg.epsilon / total_weight;
    let delta_term = cfg.delta / pairs.len() as f64;
    let k_term = cfg.samples.unwrap_or_else(|| hoeffding_samples(eps_term, delta_term));

    let mut psi_cache: Vec<Option<StabilizerState>> = vec![None; branches.len()];
    let mut estimate = 0.0;
    let mut violations = 0;
    for (stream, &(a, b)) in pairs.iter().enumerate() {
        let (ba, bb) = (&branches[a], &branches[b]);
        let psi = psi_cache[a].get_or_insert_with(|| StabilizerState::evolve(&ba.u, &cinv));
        let w = ba.u.xor(&bb.u);
        let r = comp
            .clifford
            .conjugate_pauli(&PauliOperator::from_parts(0, w, BitString::zeros(n)), Direction::Inverse);
        let m = PauliSandwich::new(r, bb.diag.clone(), p_obs.clone(), ba.diag.adjoint());
        let mult = if a == b { 1.0 } else { 2.0 };
        let c = ba.coeff.conj() * bb.coeff * i_pow((4 - ba.phase) % 4) * i_pow(bb.phase) * mult;
        let rotation = c / c.norm();
        let s = estimate_real_part(psi, &m, rotation, k_term, cfg.seed, stream as u64, cfg);
        estimate += c.norm() * s.re;
        violations += s.violations;
    }
    let mut result = EstimateResult::real(estimate, -1.0, 1.0, cfg);
    result.samples = k_term * pairs.len() as u64;
    result.terms = pairs.len();
    result.bound_violations = violations;
    result.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Observable, OracleConfig, StateVector};

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s).unwrap()
    }

    fn oracle(n: usize, items: &[PauliItem], x: &BitString, q: usize) -> f64 {
        let mut s = StateVector::from_bits(x, &OracleConfig::default()).unwrap();
        for it in items {
            let (PauliItem::Member(t, p) | PauliItem::Extra(t, p)) = it;
            s.apply_gate(&Gate::pauli_exp(*t, p.clone())).unwrap();
        }
        assert_eq!(s.num_qudits(), n);
        s.expectation(&Observable::z(q)).unwrap()
    }

    #[test]
    fn compile_single_z_and_empty() {
        let c = compile_commuting_pauli(1, &[(0.3, p("Z"))]).unwrap();
        assert!(c.clifford.is_empty());
        assert_eq!(c.diag[0].operator(), &p("Z"));
        assert!(compile_commuting_pauli(3, &[]).unwrap().clifford.is_empty());
    }

    #[test]
    fn diagonal_gate_on_eigenstate_is_exact() {
        let cfg = EstimatorConfig::new(0.05, 0.01, 3);
        let r = simulate_commuting_pauli(1, &[(0.7, p("Z"))], &BitString::zeros(1), 0, &cfg).unwrap();
        assert_eq!(r.raw_value, 1.0);
        assert_eq!(r.samples, 8478);
    }

    #[test]
    fn x_rotation_gives_cos_two_theta() {
        let theta = 0.4;
        let cfg = EstimatorConfig::new(0.05, 0.01, 5);
        let r = simulate_commuting_pauli(1, &[(theta, p("X"))], &BitString::zeros(1), 0, &cfg).unwrap();
        assert!((r.value - (2.0 * theta).cos()).abs() < 0.05);
        assert_eq!(r.bound_violations, 0);
    }

    #[test]
    fn one_qubit_with_an_extra() {
        let items = vec![PauliItem::Member(0.5, p("X")), PauliItem::Extra(0.8, p("Z")), PauliItem::Member(-0.2, p("X"))];
        let x = BitString::zeros(1);
        let cfg = EstimatorConfig::new(0.05, 0.01, 8);
        let r = simulate_noncommuting_pauli(1, &items, &x, 0, &cfg, 0).unwrap();
        assert!((r.value - oracle(1, &items, &x, 0)).abs() < 0.05, "{} vs {}", r.value, oracle(1, &items, &x, 0));
        assert_eq!(r.terms, 3);
    }

    #[test]
    fn exact_sample_counts_recover_oracle() {
        // many samples on a small instance: deviation far below ε
        let items = vec![
            PauliItem::Member(0.3, p("XZI")),
            PauliItem::Extra(0.6, p("YYI")),
            PauliItem::Member(0.9, p("ZXZ")),
            PauliItem::Extra(-0.4, p("IZX")),
            PauliItem::Member(-0.5, p("IZX")),
        ];
        let x = BitString::parse("010").unwrap();
        let cfg = EstimatorConfig::new(0.05, 0.01, 1).with_samples(200_000);
        let r = simulate_noncommuting_pauli(3, &items, &x, 1, &cfg, 0).unwrap();
        assert!((r.value - oracle(3, &items, &x, 1)).abs() < 0.02);
    }

    #[test]
    fn errors() {
        let cfg = EstimatorConfig::new(0.05, 0.01, 1);
        let x = BitString::zeros(2);
        let bad = vec![PauliItem::Member(0.1, p("XI")), PauliItem::Member(0.1, p("ZI"))];
        assert!(matches!(simulate_noncommuting_pauli(2, &bad, &x, 0, &cfg, 0), Err(Error::NotCommuting(0, 1))));
        let many: Vec<_> = (0..3).map(|_| PauliItem::Extra(0.1, p("XI"))).collect();
        assert!(matches!(
            simulate_noncommuting_pauli(2, &many, &x, 0, &cfg, 2),
            Err(Error::TooManyExtras { found: 3, limit: 2 })
        ));
    }
}
