//! Brute-force statevector simulation of qudit circuits.
//!
//! This is the ground truth the other simulators are checked against, and
//! the stand-in for a small quantum device in the transformer pipelines.
//! Gates are applied by index arithmetic on the basis; no full-register
//! matrix is ever built.

use rand::Rng;

use crate::bits::BitString;
use crate::circuit::{Circuit, Gate};
use crate::error::Error;
use crate::linalg::{hermiticity_defect, pauli_matrix_on, pow_usize, CMatrix, LocalPlan, C64, ONE, ZERO};
use crate::pauli::PauliOperator;

pub const DEFAULT_MAX_AMPLITUDES: usize = 1 << 26;

/// Environment variable that overrides [`DEFAULT_MAX_AMPLITUDES`].
pub const MAX_AMPLITUDES_ENV: &str = "COMMSIM_MAX_AMPLITUDES";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_amplitudes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
        }
    }
}

impl OracleConfig {
    /// Default config, with the cap taken from `COMMSIM_MAX_AMPLITUDES` if set.
    pub fn from_env() -> Self {
        let max_amplitudes = std::env::var(MAX_AMPLITUDES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_AMPLITUDES);
        OracleConfig { max_amplitudes }
    }

    /// Number of amplitudes of an `n`-qudit register, or `CapacityExceeded`.
    pub fn check(&self, n: usize, d: usize) -> Result<usize, Error> {
        let mut required: u128 = 1;
        for _ in 0..n {
            required = required.saturating_mul(d as u128);
        }
        if required > self.max_amplitudes as u128 {
            return Err(Error::CapacityExceeded {
                required,
                cap: self.max_amplitudes,
            });
        }
        Ok(required as usize)
    }
}

/// Parses a basis string such as `"0120"` into digits, checking each is `< d`.
pub fn parse_basis(s: &str, d: usize) -> Result<Vec<usize>, Error> {
    s.trim()
        .chars()
        .map(|ch| match ch.to_digit(36) {
            Some(v) if (v as usize) < d => Ok(v as usize),
            _ => Err(Error::InvalidConfig(format!(
                "'{ch}' is not a basis digit for d = {d}"
            ))),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    d: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize, d: usize, cfg: &OracleConfig) -> Result<StateVector, Error> {
        let dim = cfg.check(n, d)?;
        let mut amps = vec![ZERO; dim];
        amps[0] = ONE;
        Ok(StateVector { n, d, amps })
    }

    /// The basis state with the given digits (qudit 0 first).
    pub fn basis(digits: &[usize], d: usize, cfg: &OracleConfig) -> Result<StateVector, Error> {
        let mut s = StateVector::zero(digits.len(), d, cfg)?;
        s.amps[0] = ZERO;
        let idx = index_of(digits, d)?;
        s.amps[idx] = ONE;
        Ok(s)
    }

    pub fn from_bits(bits: &BitString, cfg: &OracleConfig) -> Result<StateVector, Error> {
        let digits: Vec<usize> = (0..bits.len()).map(|i| bits.get(i) as usize).collect();
        StateVector::basis(&digits, 2, cfg)
    }

    /// Tensor product of single-qudit vectors, qudit 0 first.
    pub fn product(factors: &[Vec<C64>], d: usize, cfg: &OracleConfig) -> Result<StateVector, Error> {
        let dim = cfg.check(factors.len(), d)?;
        let mut amps = Vec::with_capacity(dim);
        amps.push(ONE);
        for f in factors {
            if f.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "product factor of length {} for d = {d}",
                    f.len()
                )));
            }
            let mut next = Vec::with_capacity(amps.len() * d);
            for a in &amps {
                for b in f {
                    next.push(a * b);
                }
            }
            amps = next;
        }
        Ok(StateVector {
            n: factors.len(),
            d,
            amps,
        })
    }

    /// Wraps raw amplitudes; they must have unit norm within 1e-9.
    pub fn from_amplitudes(n: usize, d: usize, amps: Vec<C64>) -> Result<StateVector, Error> {
        if pow_usize(d, n) != Some(amps.len()) {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for {n} qudits of dimension {d}",
                amps.len()
            )));
        }
        let s = StateVector { n, d, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!("state has squared norm {norm}")));
        }
        Ok(s)
    }

    pub fn num_qudits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨digits|ψ⟩`.
    pub fn amplitude(&self, digits: &[usize]) -> Result<C64, Error> {
        if digits.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "basis string of length {} for {} qudits",
                digits.len(),
                self.n
            )));
        }
        Ok(self.amps[index_of(digits, self.d)?])
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply_gate(&mut self, g: &Gate) -> Result<(), Error> {
        let wires = g.wires();
        if let Some(&q) = wires.iter().find(|&&q| q >= self.n) {
            return Err(Error::DimensionMismatch(format!(
                "gate acts on qudit {} of a {}-qudit register",
                q + 1,
                self.n
            )));
        }
        if g.requires_qubits() && self.d != 2 {
            return Err(Error::DimensionMismatch(format!("qubit gate on d = {} register", self.d)));
        }
        if let Gate::PauliExp { theta, pauli } = g {
            if pauli.num_qubits() != self.n {
                return Err(Error::DimensionMismatch(format!(
                    "Pauli on {} qubits, register has {}",
                    pauli.num_qubits(),
                    self.n
                )));
            }
            self.apply_pauli_exp(*theta, pauli);
            return Ok(());
        }
        let m = g.local_matrix();
        if pow_usize(self.d, wires.len()) != Some(m.nrows()) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} gate matrix on {} qudits of dimension {}",
                m.nrows(),
                m.ncols(),
                wires.len(),
                self.d
            )));
        }
        LocalPlan::new(self.n, self.d, &wires, &m).apply(&mut self.amps);
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<(), Error> {
        if c.num_qudits() != self.n || c.dim() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "circuit on {} qudits (d = {}), state on {} (d = {})",
                c.num_qudits(),
                c.dim(),
                self.n,
                self.d
            )));
        }
        for g in c.gates() {
            self.apply_gate(g)?;
        }
        Ok(())
    }

    /// `e^{iθP}ψ = cos θ ψ + i sin θ Pψ`, computed in one pass.
    fn apply_pauli_exp(&mut self, theta: f64, pauli: &PauliOperator) {
        let (xmask, zmask) = masks(pauli, self.n);
        let (s, c) = theta.sin_cos();
        let base = crate::linalg::i_pow((pauli.phase() + 1) % 4) * s;
        let mut out = vec![ZERO; self.amps.len()];
        for (y, a) in self.amps.iter().enumerate() {
            let sign = if (y & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[y] += a * c;
            out[y ^ xmask] += a * base * sign;
        }
        self.amps = out;
    }

    /// `⟨ψ|O|ψ⟩`; the imaginary part vanishes for Hermitian `O`.
    pub fn expectation(&self, o: &Observable) -> Result<f64, Error> {
        let v = self.expectation_complex(o)?;
        debug_assert!(v.im.abs() < 1e-9, "imaginary expectation {v}");
        Ok(v.re)
    }

    fn expectation_complex(&self, o: &Observable) -> Result<C64, Error> {
        if o.support.iter().any(|&q| q >= self.n) || pow_usize(self.d, o.support.len()) != Some(o.matrix.nrows()) {
            return Err(Error::DimensionMismatch(format!(
                "observable on qudits {:?} does not fit a {}-qudit register of dimension {}",
                o.support.iter().map(|q| q + 1).collect::<Vec<_>>(),
                self.n,
                self.d
            )));
        }
        let mut tmp = self.amps.clone();
        LocalPlan::new(self.n, self.d, &o.support, &o.matrix).apply(&mut tmp);
        Ok(self.amps.iter().zip(&tmp).map(|(a, b)| a.conj() * b).sum())
    }

    /// Born-rule probabilities of the outcomes of qudit `i`.
    pub fn marginal(&self, i: usize) -> Vec<f64> {
        let stride = pow_usize(self.d, self.n - 1 - i).unwrap();
        let mut p = vec![0.0; self.d];
        for (idx, a) in self.amps.iter().enumerate() {
            p[(idx / stride) % self.d] += a.norm_sqr();
        }
        p
    }

    /// Measures qudit `i` in the computational basis without collapsing.
    pub fn sample_measurement<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> usize {
        draw(&self.marginal(i), rng)
    }

    /// Draws a full basis string, qudit 0 first, by sequential conditional
    /// marginals: each digit is drawn given the ones before it.
    pub fn sample_basis<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        let mut digits = Vec::with_capacity(self.n);
        let mut lo = 0usize;
        let mut len = self.amps.len();
        for _ in 0..self.n {
            let block = len / self.d;
            let weights: Vec<f64> = (0..self.d)
                .map(|v| {
                    self.amps[lo + v * block..lo + (v + 1) * block]
                        .iter()
                        .map(|a| a.norm_sqr())
                        .sum()
                })
                .collect();
            let v = draw(&weights, rng);
            digits.push(v);
            lo += v * block;
            len = block;
        }
        digits
    }
}

fn draw<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let mut u = rng.random::<f64>() * total;
    for (v, w) in weights.iter().enumerate() {
        if u < *w {
            return v;
        }
        u -= w;
    }
    // rounding: fall back to the last outcome with positive weight
    weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
}

fn index_of(digits: &[usize], d: usize) -> Result<usize, Error> {
    let mut idx = 0usize;
    for &v in digits {
        if v >= d {
            return Err(Error::DimensionMismatch(format!("digit {v} for d = {d}")));
        }
        idx = idx * d + v;
    }
    Ok(idx)
}

/// X and Z masks of a Pauli operator in big-endian index order.
fn masks(p: &PauliOperator, n: usize) -> (usize, usize) {
    let mut x = 0usize;
    let mut z = 0usize;
    for q in 0..n {
        let bit = 1usize << (n - 1 - q);
        if p.x_part().get(q) {
            x |= bit;
        }
        if p.z_part().get(q) {
            z |= bit;
        }
    }
    (x, z)
}

/// A Hermitian operator on a few qudits, in the tensor order of `support`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    support: Vec<usize>,
    matrix: CMatrix,
}

impl Observable {
    pub fn new(support: Vec<usize>, matrix: CMatrix) -> Result<Observable, Error> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch("observable matrix is not square".into()));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > 1e-10 {
            return Err(Error::InvalidConfig(format!(
                "observable is not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(Observable { support, matrix })
    }

    /// `Z` on qubit `q`.
    pub fn z(q: usize) -> Observable {
        Observable {
            support: vec![q],
            matrix: crate::linalg::diag(&[ONE, -ONE]),
        }
    }

    pub fn from_pauli(p: &PauliOperator) -> Result<Observable, Error> {
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(0));
        }
        let support = p.support();
        let matrix = pauli_matrix_on(p, &support);
        Ok(Observable { support, matrix })
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// `⟨y|U_c|x⟩`.
pub fn matrix_element(c: &Circuit, x: &[usize], y: &[usize], cfg: &OracleConfig) -> Result<C64, Error> {
    let mut s = StateVector::basis(x, c.dim(), cfg)?;
    if s.num_qudits() != c.num_qudits() {
        return Err(Error::DimensionMismatch(format!(
            "basis string of length {} for {} qudits",
            x.len(),
            c.num_qudits()
        )));
    }
    s.apply_circuit(c)?;
    s.amplitude(y)
}

/// `U_c|0…0⟩`.
pub fn run_from_zero(c: &Circuit, cfg: &OracleConfig) -> Result<StateVector, Error> {
    let mut s = StateVector::zero(c.num_qudits(), c.dim(), cfg)?;
    s.apply_circuit(c)?;
    Ok(s)
}

/// Full unitary of a circuit, one column per basis input. The cap applies to
/// the `D²` matrix entries.
pub fn circuit_unitary(c: &Circuit, cfg: &OracleConfig) -> Result<CMatrix, Error> {
    let dim = cfg.check(c.num_qudits(), c.dim())?;
    cfg.check(2 * c.num_qudits(), c.dim())?;
    let mut u = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut amps = vec![ZERO; dim];
        amps[col] = ONE;
        let mut s = StateVector {
            n: c.num_qudits(),
            d: c.dim(),
            amps,
        };
        s.apply_circuit(c)?;
        for (r, a) in s.amps.iter().enumerate() {
            u[(r, col)] = *a;
        }
    }
    Ok(u)
}
