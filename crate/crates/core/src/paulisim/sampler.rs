use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::monomial::MonomialOperator;
use super::{Aggregation, EstimateResult, EstimatorConfig};
use crate::bits::BitString;
use crate::error::Error;
use crate::linalg::{i_pow, C64};
use crate::stabilizer::StabilizerState;

/// Samples per RNG stream.
pub(crate) const CHUNK: u64 = 1024;

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of chunk `chunk` of stream `stream`.
pub(crate) fn stream_seed(seed: u64, stream: u64, chunk: u64) -> u64 {
    splitmix(splitmix(splitmix(seed) ^ stream) ^ chunk)
}

pub(crate) fn chunk_rng(seed: u64, stream: u64, chunk: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(seed, stream, chunk))
}

/// A source of complex sample variables.
pub(crate) trait Sampler: Sync {
    type Scratch;
    fn scratch(&self) -> Self::Scratch;
    fn draw(&self, rng: &mut ChaCha8Rng, scratch: &mut Self::Scratch) -> C64;
}

/// Aggregated sample statistics of one estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Summary {
    pub re: f64,
    pub im: f64,
    pub violations: u64,
}

struct ChunkOut {
    /// Per-group sums; a single group for plain means.
    sums: Vec<(f64, f64)>,
    violations: u64,
}

/// Runs `k` samples and aggregates them. Deterministic in
/// `(seed, stream, k)` whatever the worker count.
pub(crate) fn run<S: Sampler>(s: &S, k: u64, seed: u64, stream: u64, workers: usize, agg: Aggregation) -> Summary {
    let groups = match agg {
        Aggregation::Mean => 1,
        Aggregation::MedianOfMeans { groups } => (groups as u64).clamp(1, k.max(1)) as usize,
    };
    let chunks = k.div_ceil(CHUNK);
    let job = |c: u64| -> ChunkOut {
        let mut rng = chunk_rng(seed, stream, c);
        let mut scratch = s.scratch();
        let mut out = ChunkOut {
            sums: vec![(0.0, 0.0); groups],
            violations: 0,
        };
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(k);
        for i in lo..hi {
            let x = s.draw(&mut rng, &mut scratch);
            let m = x.norm();
            if m > 1e-12 && (m - 1.0).abs() > 1e-12 {
                out.violations += 1;
            }
            let g = ((i as u128 * groups as u128) / k as u128) as usize;
            out.sums[g].0 += x.re;
            out.sums[g].1 += x.im;
        }
        out
    };
    let outs: Vec<ChunkOut> = if workers <= 1 || chunks <= 1 {
        (0..chunks).map(job).collect()
    } else {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(|| (0..chunks).into_par_iter().map(job).collect()),
            Err(_) => (0..chunks).map(job).collect(),
        }
    };
    let mut sums = vec![(0.0, 0.0); groups];
    let mut violations = 0;
    for o in &outs {
        for (acc, s) in sums.iter_mut().zip(&o.sums) {
            acc.0 += s.0;
            acc.1 += s.1;
        }
        violations += o.violations;
    }
    if groups == 1 {
        return Summary {
            re: sums[0].0 / k as f64,
            im: sums[0].1 / k as f64,
            violations,
        };
    }
    let sizes: Vec<u64> = (0..groups as u64)
        .map(|g| ((g + 1) * k).div_ceil(groups as u64) - (g * k).div_ceil(groups as u64))
        .collect();
    let median = |f: &dyn Fn(&(f64, f64)) -> f64| {
        let mut means: Vec<f64> = sums.iter().zip(&sizes).map(|(s, &n)| f(s) / n as f64).collect();
        means.sort_by(|a, b| a.total_cmp(b));
        let m = means.len();
        if m % 2 == 1 {
            means[m / 2]
        } else {
            0.5 * (means[m / 2 - 1] + means[m / 2])
        }
    };
    Summary {
        re: median(&|s| s.0),
        im: median(&|s| s.1),
        violations,
    }
}

/// `X(y) = e^{iχ} λ_y conj(ψ_{π(y)}) / conj(φ_y)` with `y ~ |φ_y|²`, whose
/// mean is `e^{iχ} ⟨ψ|M|φ⟩`.
pub(crate) struct SandwichSampler<'a> {
    pub psi: &'a StabilizerState,
    pub phi: &'a StabilizerState,
    pub monomial: &'a dyn MonomialOperator,
    pub rotation: C64,
}

impl SandwichSampler<'_> {
    fn ratio(&self) -> f64 {
        self.psi.modulus() / self.phi.modulus()
    }
}

impl Sampler for SandwichSampler<'_> {
    type Scratch = (BitString, BitString, BitString);

    fn scratch(&self) -> Self::Scratch {
        let n = self.phi.num_qubits();
        (BitString::zeros(n), BitString::zeros(n), BitString::zeros(n))
    }

    fn draw(&self, rng: &mut ChaCha8Rng, (y, py, work): &mut Self::Scratch) -> C64 {
        self.phi.sample_into(rng, y);
        let k_phi = self
            .phi
            .amplitude_exact_in(y, work)
            .expect("sampled state lies in the support");
        py.clone_from(y);
        let lambda = self.monomial.act(py);
        match self.psi.amplitude_exact_in(py, work) {
            // conj(i^a)/conj(i^b) = i^{b − a}
            Some(k_psi) => self.rotation * lambda * i_pow((4 + k_phi - k_psi) % 4) * self.ratio(),
            None => C64::new(0.0, 0.0),
        }
    }
}

/// Shared routine for real estimates of `Re(e^{iχ} ⟨ψ|M|ψ⟩)`.
pub(crate) fn estimate_real_part(
    psi: &StabilizerState,
    m: &dyn MonomialOperator,
    rotation: C64,
    k: u64,
    seed: u64,
    stream: u64,
    cfg: &EstimatorConfig,
) -> Summary {
    let s = SandwichSampler {
        psi,
        phi: psi,
        monomial: m,
        rotation,
    };
    run(&s, k, seed, stream, cfg.workers, cfg.aggregation)
}

/// Estimates `⟨ψ|M|φ⟩` for stabilizer states `ψ, φ` and a monomial `M`.
///
/// Samples `y ~ |⟨y|φ⟩|²` and averages `λ_y conj(⟨π(y)|ψ⟩) / conj(⟨y|φ⟩)`.
/// When `ψ` and `φ` have equal support dimension every sample has modulus
/// 0 or 1; otherwise the sample count is scaled by the square of the
/// modulus bound. Real and imaginary parts are each held to `ε/√2` with
/// failure probability `δ/2`, so `|E − ⟨ψ|M|φ⟩| ≤ ε` with probability at
/// least `1 − δ`.
pub fn estimate_monomial_sandwich(
    psi: &StabilizerState,
    m: &dyn MonomialOperator,
    phi: &StabilizerState,
    cfg: &EstimatorConfig,
) -> Result<EstimateResult, Error> {
    cfg.validate()?;
    let n = phi.num_qubits();
    if psi.num_qubits() != n || m.num_qubits() != n {
        return Err(Error::SizeMismatch(psi.num_qubits(), n));
    }
    let sampler = SandwichSampler {
        psi,
        phi,
        monomial: m,
        rotation: C64::new(1.0, 0.0),
    };
    let bound = sampler.ratio().max(1.0);
    let k = cfg.samples.unwrap_or_else(|| {
        let eps = cfg.epsilon / std::f64::consts::SQRT_2;
        (4.0 * bound * bound * (4.0 / cfg.delta).ln() / (eps * eps)).ceil() as u64
    });
    let s = run(&sampler, k, cfg.seed, 0, cfg.workers, cfg.aggregation);
    let raw = C64::new(s.re, s.im);
    let clamped = if raw.norm() > 1.0 { raw / raw.norm() } else { raw };
    Ok(EstimateResult {
        value: clamped.re,
        raw_value: raw.re,
        imag: Some(clamped.im),
        raw_imag: Some(raw.im),
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        samples: k,
        seed: cfg.seed,
        terms: 1,
        bound_violations: s.violations,
        elapsed_ms: None,
    })
}
