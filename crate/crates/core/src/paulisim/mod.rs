//! Monte-Carlo weak simulation of commuting Pauli circuits, optionally
//! interspersed with a few non-commuting Pauli exponentials.
//!
//! Every estimate is a mean of bounded sample variables, so the
//! Chernoff-Hoeffding bound `K = ⌈4 ln(2/δ)/ε²⌉` gives accuracy `ε` with
//! probability at least `1 − δ`. Samples are drawn in fixed chunks with one
//! seeded stream per chunk, so results depend only on the seed and the
//! sample count, never on the number of worker threads.

mod circuits;
mod monomial;
mod sampler;

pub use circuits::{
    compile_commuting_pauli, pauli_gates, simulate_commuting_pauli, simulate_noncommuting_pauli, CommutingCompilation,
    PauliItem, DEFAULT_MAX_EXTRAS,
};
pub use monomial::{Composition, DiagonalProduct, DiagonalZExp, MonomialOperator, PauliMonomial, PauliSandwich};
pub use sampler::estimate_monomial_sandwich;
pub(crate) use sampler::chunk_rng;

use serde::Serialize;

use crate::error::Error;

/// How the per-sample values of one estimate are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    Mean,
    /// Median of `groups` block means.
    MedianOfMeans { groups: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimatorConfig {
    pub epsilon: f64,
    pub delta: f64,
    pub seed: u64,
    /// Overrides the Hoeffding sample count.
    pub samples: Option<u64>,
    /// Worker threads; results do not depend on it.
    pub workers: usize,
    pub aggregation: Aggregation,
}

impl EstimatorConfig {
    pub fn new(epsilon: f64, delta: f64, seed: u64) -> EstimatorConfig {
        EstimatorConfig {
            epsilon,
            delta,
            seed,
            samples: None,
            workers: 1,
            aggregation: Aggregation::Mean,
        }
    }

    pub fn with_samples(mut self, k: u64) -> Self {
        self.samples = Some(k);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_aggregation(mut self, aggregation: Aggregation) -> Self {
        self.aggregation = aggregation;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::InvalidConfig(format!("epsilon {} not in (0, 1]", self.epsilon)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidConfig(format!("delta {} not in (0, 1)", self.delta)));
        }
        if self.samples == Some(0) {
            return Err(Error::InvalidConfig("sample count must be positive".into()));
        }
        if let Aggregation::MedianOfMeans { groups } = self.aggregation {
            if groups == 0 {
                return Err(Error::InvalidConfig("median-of-means needs at least one group".into()));
            }
        }
        Ok(())
    }

    /// `K` for this configuration: explicit, or `⌈4 ln(2/δ)/ε²⌉`.
    pub fn sample_count(&self) -> u64 {
        self.samples.unwrap_or_else(|| hoeffding_samples(self.epsilon, self.delta))
    }
}

/// Smallest `K` with `2 exp(−Kε²/4) ≤ δ` for means of variables in `[−1, 1]`.
pub fn hoeffding_samples(epsilon: f64, delta: f64) -> u64 {
    (4.0 * (2.0 / delta).ln() / (epsilon * epsilon)).ceil() as u64
}

/// Outcome of a Monte-Carlo estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateResult {
    /// Estimate clamped to the a-priori range of the quantity.
    pub value: f64,
    pub raw_value: f64,
    /// Imaginary part, for complex matrix elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imag: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub raw_imag: Option<f64>,
    pub epsilon: f64,
    pub delta: f64,
    /// Total number of samples drawn.
    #[serde(rename = "K")]
    pub samples: u64,
    pub seed: u64,
    /// Number of separately estimated terms.
    pub terms: usize,
    /// Samples whose modulus was not 0 or 1 (beyond 1e-12).
    pub bound_violations: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl EstimateResult {
    pub(crate) fn real(raw: f64, lo: f64, hi: f64, cfg: &EstimatorConfig) -> EstimateResult {
        EstimateResult {
            value: raw.clamp(lo, hi),
            raw_value: raw,
            imag: None,
            raw_imag: None,
            epsilon: cfg.epsilon,
            delta: cfg.delta,
            samples: 0,
            seed: cfg.seed,
            terms: 1,
            bound_violations: 0,
            elapsed_ms: None,
        }
    }
}
