use std::collections::BTreeMap;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;

use super::executor::{GammaKExecutor, ShotTally};
use super::hadamard::{fold_blocks, Block, Part};
use crate::bits::BitString;
use crate::circuit::{is_commuting_pair, lightcone_gates, support_lightcone, Circuit, Gate};
use crate::error::Error;
use crate::linalg::{embed, pauli_matrix_on, CMatrix, C64};
use crate::paulisim::{hoeffding_samples, EstimateResult, EstimatorConfig};
use crate::pauli::PauliOperator;
use crate::stabilizer::{CliffordCircuit, Direction};

/// Default cap on lightcone size, enough for depth 3 with 2-qubit gates.
pub const DEFAULT_LIGHTCONE_BOUND: usize = 8;

const SUBSET_STREAM: u64 = 0;
const SHOT_STREAM: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapConfig {
    /// `ε`, `δ`, seed and workers; `samples` overrides the subset count.
    pub estimator: EstimatorConfig,
    /// Overrides the shots per sampled subset.
    pub shots: Option<u64>,
    pub lightcone_bound: usize,
}

impl OverlapConfig {
    pub fn new(estimator: EstimatorConfig) -> OverlapConfig {
        OverlapConfig {
            estimator,
            shots: None,
            lightcone_bound: DEFAULT_LIGHTCONE_BOUND,
        }
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = Some(shots);
        self
    }

    /// Number of sampled subsets: the Hoeffding count at `(ε/2, δ/2)`.
    pub fn subset_count(&self) -> u64 {
        let e = &self.estimator;
        e.samples
            .unwrap_or_else(|| hoeffding_samples(e.epsilon / 2.0, e.delta / 2.0))
    }

    /// Shots per subset: accuracy `ε/2` for every subset simultaneously,
    /// with the remaining `δ/2` split over the `K` subsets.
    pub fn shot_count(&self) -> u64 {
        let e = &self.estimator;
        let k = self.subset_count() as f64;
        self.shots
            .unwrap_or_else(|| hoeffding_samples(e.epsilon / 2.0, e.delta / 2.0 / k))
    }
}

/// A distinct sampled subset `S` with its estimate of `F(S)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubsetSample {
    pub subset: BitString,
    /// Times `S` was drawn.
    pub multiplicity: u64,
    /// Estimate of `F(S)`; only the real part is estimated.
    pub f_estimate: C64,
    /// Executor shots spent on `S`.
    pub shots: u64,
}

/// `𝒰† A_j 𝒰` restricted to the lightcone of qubit `j`.
struct Conjugated {
    cone: Vec<usize>,
    matrix: CMatrix,
}

fn lightcone_unitary(u: &Circuit, j: usize, cone: &[usize]) -> CMatrix {
    let dim = 1usize << cone.len();
    let mut acc = CMatrix::identity(dim, dim);
    for idx in lightcone_gates(u, j) {
        let g = &u.gates()[idx];
        acc = embed(&g.local_matrix(), &g.wires(), cone, 2) * acc;
    }
    acc
}

fn cones(u: &Circuit, bound: usize) -> Result<Vec<(Vec<usize>, CMatrix)>, Error> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("overlap estimation needs qubits, got dimension {}", u.dim())));
    }
    (0..u.num_qudits())
        .map(|j| {
            let cone = support_lightcone(u, j);
            if cone.len() > bound {
                return Err(Error::LightconeTooLarge {
                    qubit: j,
                    size: cone.len(),
                    bound,
                });
            }
            let v = lightcone_unitary(u, j, &cone);
            Ok((cone, v))
        })
        .collect()
}

fn conjugate_single(j: usize, cone: &[usize], v: &CMatrix, p: PauliOperator) -> Conjugated {
    let local = embed(&pauli_matrix_on(&p, &[j]), &[j], cone, 2);
    Conjugated {
        cone: cone.to_vec(),
        matrix: v.adjoint() * local * v,
    }
}

/// Runtime confirmation that the conjugated operators commute.
fn check_family(ops: &[Conjugated]) -> Result<(), Error> {
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            if !ops[i].cone.iter().any(|q| ops[j].cone.contains(q)) {
                continue;
            }
            let a = Gate::dense(ops[i].cone.clone(), ops[i].matrix.clone());
            let b = Gate::dense(ops[j].cone.clone(), ops[j].matrix.clone());
            if !is_commuting_pair(&a, &b, 2) {
                return Err(Error::NotCommuting(i, j));
            }
        }
    }
    Ok(())
}

/// Draws `K` uniform subsets and groups them; sorted, so the order is
/// independent of hashing and threads.
fn draw_subsets(n: usize, k: u64, seed: u64) -> Vec<(BitString, u64)> {
    let mut rng = crate::paulisim::chunk_rng(seed, SUBSET_STREAM, 0);
    let mut counts: BTreeMap<Vec<u64>, (BitString, u64)> = BTreeMap::new();
    for _ in 0..k {
        let s = BitString::from_bools((0..n).map(|_| rng.random::<bool>()));
        counts.entry(s.words().to_vec()).or_insert((s, 0)).1 += 1;
    }
    counts.into_values().collect()
}

/// One test per distinct subset. `build` returns the test circuit and the
/// sign `σ` such that `Re F(S) = σ·⟨Z₁⟩`.
fn run_subsets<F>(
    n: usize,
    cfg: &OverlapConfig,
    exec: &dyn GammaKExecutor,
    build: F,
) -> Result<(EstimateResult, Vec<SubsetSample>), Error>
where
    F: Fn(&BitString) -> (Circuit, f64) + Sync,
{
    let start = Instant::now();
    let e = &cfg.estimator;
    e.validate()?;
    if cfg.shots == Some(0) {
        return Err(Error::InvalidConfig("shot count must be positive".into()));
    }
    let k = cfg.subset_count();
    let shots = cfg.shot_count();
    let subsets = draw_subsets(n, k, e.seed);
    let job = |(i, (s, count)): (usize, &(BitString, u64))| -> Result<SubsetSample, Error> {
        let (circuit, sign) = build(s);
        let mut rng = crate::paulisim::chunk_rng(e.seed, SHOT_STREAM, i as u64);
        let total = shots * count;
        let tally: ShotTally = exec.run(&circuit, total, &mut rng)?;
        if tally.shots() != total {
            return Err(Error::InvalidConfig(format!(
                "executor returned {} shots, {total} requested",
                tally.shots()
            )));
        }
        Ok(SubsetSample {
            subset: s.clone(),
            multiplicity: *count,
            f_estimate: C64::new(sign * tally.mean_z(), 0.0),
            shots: total,
        })
    };
    let results: Vec<Result<SubsetSample, Error>> = if e.workers <= 1 {
        subsets.iter().enumerate().map(job).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(e.workers).build() {
            Ok(pool) => pool.install(|| subsets.par_iter().enumerate().map(job).collect()),
            Err(_) => subsets.iter().enumerate().map(job).collect(),
        }
    };
    let samples = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let raw = samples
        .iter()
        .map(|s| s.f_estimate.re * s.multiplicity as f64)
        .sum::<f64>()
        / k as f64;
    let mut result = EstimateResult::real(raw, 0.0, 1.0, e);
    result.samples = k * shots;
    result.terms = k as usize;
    result.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    Ok((result, samples))
}

/// Estimates `|⟨0|𝒰|0⟩|²` for a constant-depth qubit circuit with a
/// `Γ^k` executor.
///
/// Uses `|0⟩⟨0| = 2⁻ⁿ Σ_S Z(S)`, so the overlap is the mean of
/// `F(S) = ⟨0|Π_{j∈S} G_j|0⟩` over uniform subsets, with
/// `G_j = 𝒰†Z_j𝒰` computed densely on the lightcone of `j`. Each sampled
/// `Re F(S)` comes from a Hadamard test of the commuting circuit of the
/// `G_j`. Subset sampling and shot noise each get `ε/2` and `δ/2`.
/// Repeated subsets share one batch of shots.
pub fn estimate_cd_overlap(u: &Circuit, cfg: &OverlapConfig, exec: &dyn GammaKExecutor) -> Result<EstimateResult, Error> {
    estimate_cd_overlap_with_samples(u, cfg, exec).map(|(r, _)| r)
}

/// [`estimate_cd_overlap`], also returning the per-subset estimates.
pub fn estimate_cd_overlap_with_samples(
    u: &Circuit,
    cfg: &OverlapConfig,
    exec: &dyn GammaKExecutor,
) -> Result<(EstimateResult, Vec<SubsetSample>), Error> {
    let n = u.num_qudits();
    let cones = cones(u, cfg.lightcone_bound)?;
    let g: Vec<Conjugated> = cones
        .iter()
        .enumerate()
        .map(|(j, (cone, v))| conjugate_single(j, cone, v, PauliOperator::single_z(n, j)))
        .collect();
    check_family(&g)?;
    run_subsets(n, cfg, exec, |s| {
        let blocks = s
            .ones()
            .map(|j| Block {
                wires: g[j].cone.clone(),
                zero: None,
                one: Some(g[j].matrix.clone()),
            })
            .collect();
        (fold_blocks(n, blocks, Part::Re), 1.0)
    })
}

/// Estimates `|⟨0|𝒞𝒰|0⟩|²` for a constant-depth circuit `𝒰` followed by an
/// arbitrary Clifford circuit `𝒞`.
///
/// For each sampled `S`, `𝒞†Z(S)𝒞 = i^t X^a Z^b` is found by conjugation, so
/// `F(S) = i^t ⟨0|𝒞₁𝒞₂|0⟩` with the commuting layers
/// `𝒞₁ = Π_{a_k=1} 𝒰†X_k𝒰` and `𝒞₂ = Π_{b_k=1} 𝒰†Z_k𝒰`. Both factors on
/// qubit `k` live on its lightcone and are merged into one block, and the
/// phase `i^t` picks which part of the merged test is read out.
pub fn estimate_cd_clifford_overlap(
    u: &Circuit,
    c: &CliffordCircuit,
    cfg: &OverlapConfig,
    exec: &dyn GammaKExecutor,
) -> Result<EstimateResult, Error> {
    estimate_cd_clifford_overlap_with_samples(u, c, cfg, exec).map(|(r, _)| r)
}

/// [`estimate_cd_clifford_overlap`], also returning the per-subset estimates.
pub fn estimate_cd_clifford_overlap_with_samples(
    u: &Circuit,
    c: &CliffordCircuit,
    cfg: &OverlapConfig,
    exec: &dyn GammaKExecutor,
) -> Result<(EstimateResult, Vec<SubsetSample>), Error> {
    let n = u.num_qudits();
    if c.num_qubits() != n {
        return Err(Error::SizeMismatch(n, c.num_qubits()));
    }
    let cones = cones(u, cfg.lightcone_bound)?;
    let conj = |f: fn(usize, usize) -> PauliOperator| -> Vec<Conjugated> {
        cones
            .iter()
            .enumerate()
            .map(|(j, (cone, v))| conjugate_single(j, cone, v, f(n, j)))
            .collect()
    };
    let gx = conj(PauliOperator::single_x);
    let hz = conj(PauliOperator::single_z);
    check_family(&gx)?;
    check_family(&hz)?;
    run_subsets(n, cfg, exec, |s| {
        let zs = PauliOperator::from_parts(0, BitString::zeros(n), s.clone());
        let p = c.conjugate_pauli(&zs, Direction::Inverse);
        let blocks = (0..n)
            .filter(|&k| p.x_part().get(k) || p.z_part().get(k))
            .map(|k| Block {
                wires: gx[k].cone.clone(),
                zero: p.x_part().get(k).then(|| gx[k].matrix.adjoint()),
                one: p.z_part().get(k).then(|| hz[k].matrix.clone()),
            })
            .collect();
        // Re(i^t z): t = 0, 1, 2, 3 → Re z, −Im z, −Re z, Im z
        let (part, sign) = match p.phase() {
            0 => (Part::Re, 1.0),
            1 => (Part::Im, -1.0),
            2 => (Part::Re, -1.0),
            _ => (Part::Im, 1.0),
        };
        (fold_blocks(n, blocks, part), sign)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CliffordGate;
    use crate::oracle::{run_from_zero, OracleConfig};
    use crate::transformers::DenseExecutor;

    fn cfg(seed: u64) -> OverlapConfig {
        OverlapConfig::new(EstimatorConfig::new(0.05, 0.05, seed))
    }

    #[test]
    fn sample_sizes() {
        let c = cfg(0);
        assert_eq!(c.subset_count(), hoeffding_samples(0.025, 0.025));
        assert!(c.shot_count() > c.subset_count());
    }

    #[test]
    fn identity_gives_one() {
        let r = estimate_cd_overlap(&Circuit::qubits(3), &cfg(1), &DenseExecutor::default()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn hadamard_layer() {
        let u = Circuit::from_gates(4, 2, (0..4).map(|q| CliffordGate::H(q).into())).unwrap();
        let r = estimate_cd_overlap(&u, &cfg(2), &DenseExecutor::default()).unwrap();
        assert!((r.value - 0.0625).abs() < 0.05, "{}", r.value);
    }

    #[test]
    fn clifford_variant_with_identity_matches_plain() {
        let mut u = Circuit::qubits(3);
        u.push(CliffordGate::H(0).into()).unwrap();
        u.push(Gate::pauli_exp(0.3, PauliOperator::parse("XZI").unwrap())).unwrap();
        u.push_layer_break();
        u.push(CliffordGate::Cnot { control: 1, target: 2 }.into()).unwrap();
        let c = cfg(3).with_shots(200);
        let exec = DenseExecutor::default();
        let a = estimate_cd_overlap(&u, &c, &exec).unwrap();
        let b = estimate_cd_clifford_overlap(&u, &CliffordCircuit::new(3), &c, &exec).unwrap();
        assert!((a.raw_value - b.raw_value).abs() < 1e-3);
    }

    #[test]
    fn clifford_variant_against_oracle() {
        let mut u = Circuit::qubits(3);
        u.push(Gate::pauli_exp(0.7, PauliOperator::parse("XIY").unwrap())).unwrap();
        u.push(Gate::pauli_exp(-0.4, PauliOperator::parse("IXI").unwrap())).unwrap();
        let cl = CliffordCircuit::from_gates(
            3,
            [CliffordGate::H(0), CliffordGate::S(1), CliffordGate::Cnot { control: 0, target: 2 }, CliffordGate::H(1)],
        )
        .unwrap();
        let mut full = u.clone();
        for g in cl.to_circuit().gates() {
            full.push(g.clone()).unwrap();
        }
        let state = run_from_zero(&full, &OracleConfig::default()).unwrap();
        let want = state.amplitudes()[0].norm_sqr();
        let r = estimate_cd_clifford_overlap(&u, &cl, &cfg(4), &DenseExecutor::default()).unwrap();
        assert!((r.value - want).abs() < 0.05, "{} vs {want}", r.value);
    }

    #[test]
    fn lightcone_bound_enforced() {
        let u = Circuit::from_gates(3, 2, [CliffordGate::Cz(0, 1).into(), CliffordGate::Cz(1, 2).into()]).unwrap();
        let mut c = cfg(0);
        c.lightcone_bound = 2;
        assert!(matches!(
            estimate_cd_overlap(&u, &c, &DenseExecutor::default()),
            Err(Error::LightconeTooLarge { qubit: 1, size: 3, bound: 2 })
        ));
    }
}
