use rand::RngCore;
use rand_distr::{Binomial, Distribution};

use crate::circuit::Circuit;
use crate::error::Error;
use crate::oracle::{run_from_zero, OracleConfig};

/// Outcome counts of `Z` on qubit 1 over a batch of shots.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ShotTally {
    /// Outcome 0, i.e. `Z = +1`.
    pub zeros: u64,
    pub ones: u64,
}

impl ShotTally {
    pub fn shots(&self) -> u64 {
        self.zeros + self.ones
    }

    /// Empirical `⟨Z₁⟩ = 2p̂(0) − 1`.
    pub fn mean_z(&self) -> f64 {
        (self.zeros as f64 - self.ones as f64) / self.shots() as f64
    }

    /// The individual `±1` outcomes, zeros first.
    pub fn outcomes(&self) -> impl Iterator<Item = i8> {
        std::iter::repeat_n(1, self.zeros as usize).chain(std::iter::repeat_n(-1, self.ones as usize))
    }
}

/// A device that runs a commuting circuit on `|0…0⟩` and measures `Z` on
/// qubit 1, `shots` times.
pub trait GammaKExecutor: Sync {
    fn run(&self, c: &Circuit, shots: u64, rng: &mut dyn RngCore) -> Result<ShotTally, Error>;
}

/// Exact Born probabilities from the statevector oracle, with shot noise
/// drawn as one binomial count per batch.
#[derive(Clone, Debug, Default)]
pub struct DenseExecutor {
    pub oracle: OracleConfig,
    /// Reject circuits with a gate wider than this.
    pub max_locality: Option<usize>,
}

impl DenseExecutor {
    pub fn new(oracle: OracleConfig) -> DenseExecutor {
        DenseExecutor {
            oracle,
            max_locality: None,
        }
    }
}

impl GammaKExecutor for DenseExecutor {
    fn run(&self, c: &Circuit, shots: u64, rng: &mut dyn RngCore) -> Result<ShotTally, Error> {
        if let Some(k) = self.max_locality {
            c.check_locality(k)?;
        }
        let p0 = exact_p0(c, &self.oracle)?;
        let zeros = Binomial::new(shots, p0)
            .map_err(|e| Error::InvalidConfig(e.to_string()))?
            .sample(rng);
        Ok(ShotTally {
            zeros,
            ones: shots - zeros,
        })
    }
}

/// Probability that qubit 1 of `c|0…0⟩` reads 0.
pub fn exact_p0(c: &Circuit, cfg: &OracleConfig) -> Result<f64, Error> {
    Ok(run_from_zero(c, cfg)?.marginal(0)[0].clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CliffordGate;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frequencies_follow_born_rule() {
        let c = Circuit::from_gates(1, 2, [CliffordGate::H(0).into()]).unwrap();
        let exec = DenseExecutor::default();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = exec.run(&c, 10_000, &mut rng).unwrap();
        assert_eq!(t.shots(), 10_000);
        assert!((t.zeros as f64 - 5000.0).abs() < 150.0);
        assert_eq!(t.outcomes().count(), 10_000);
        let z = exec.run(&Circuit::qubits(2), 50, &mut rng).unwrap();
        assert_eq!(z.mean_z(), 1.0);
    }

    #[test]
    fn locality_limit() {
        let c = Circuit::from_gates(2, 2, [CliffordGate::Cz(0, 1).into()]).unwrap();
        let exec = DenseExecutor {
            max_locality: Some(1),
            ..DenseExecutor::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(exec.run(&c, 1, &mut rng), Err(Error::LocalityExceeded { .. })));
    }
}
