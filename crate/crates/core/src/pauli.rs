//! Exact algebra of n-qubit Pauli operators.
//!
//! Every operator is stored in the normal form `i^t · Π_k X_k^{a_k} Z_k^{b_k}`
//! with `t ∈ Z₄`. Phases are tracked as integers; nothing here uses floating
//! point. Qubits are 0-based internally and 1-based in text.

use std::fmt;
use std::str::FromStr;

use crate::bits::BitString;
use crate::error::{Error, ParseError};

/// `i^t · X^a · Z^b` on `n` qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    phase: u8,
    x: BitString,
    z: BitString,
}

/// The binary vector `(a₁..a_n, b₁..b_n)` of a Pauli operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymplecticVector(BitString);

impl SymplecticVector {
    pub fn bits(&self) -> &BitString {
        &self.0
    }

    pub fn xor(&self, other: &SymplecticVector) -> SymplecticVector {
        SymplecticVector(self.0.xor(&other.0))
    }
}

/// Result of applying a Pauli operator to a basis state: `P|y⟩ = i^phase |y'⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisAction {
    pub phase: u8,
    pub state: BitString,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            phase: 0,
            x: BitString::zeros(n),
            z: BitString::zeros(n),
        }
    }

    /// Builds `i^phase X^x Z^z`; the phase is reduced mod 4.
    pub fn from_parts(phase: u8, x: BitString, z: BitString) -> Self {
        assert_eq!(x.len(), z.len(), "X and Z parts must have equal length");
        PauliOperator {
            phase: phase % 4,
            x,
            z,
        }
    }

    pub fn single_x(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.x.set(q, true);
        p
    }

    pub fn single_z(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.z.set(q, true);
        p
    }

    /// `Y_q = i X_q Z_q`.
    pub fn single_y(n: usize, q: usize) -> Self {
        let mut p = Self::identity(n);
        p.x.set(q, true);
        p.z.set(q, true);
        p.phase = 1;
        p
    }

    /// `Π_{q ∈ qubits} Z_q`.
    pub fn z_string<I: IntoIterator<Item = usize>>(n: usize, qubits: I) -> Self {
        let mut p = Self::identity(n);
        for q in qubits {
            p.z.flip(q);
        }
        p
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    /// Exponent `t` of the leading `i^t`.
    #[inline]
    pub fn phase(&self) -> u8 {
        self.phase
    }

    #[inline]
    pub fn x_part(&self) -> &BitString {
        &self.x
    }

    #[inline]
    pub fn z_part(&self) -> &BitString {
        &self.z
    }

    pub(crate) fn parts_mut(&mut self) -> (&mut u8, &mut BitString, &mut BitString) {
        (&mut self.phase, &mut self.x, &mut self.z)
    }

    pub fn symplectic(&self) -> SymplecticVector {
        let n = self.num_qubits();
        let mut r = BitString::zeros(2 * n);
        for q in self.x.ones() {
            r.set(q, true);
        }
        for q in self.z.ones() {
            r.set(n + q, true);
        }
        SymplecticVector(r)
    }

    /// True iff the operator is `±I` or `±iI`.
    pub fn is_scalar(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Qubits acted on non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits())
            .filter(|&q| self.x.get(q) || self.z.get(q))
            .collect()
    }

    pub fn weight(&self) -> usize {
        self.support().len()
    }

    fn check_size(&self, other: &PauliOperator) -> Result<(), Error> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::SizeMismatch(self.num_qubits(), other.num_qubits()));
        }
        Ok(())
    }

    /// Canonical form of the matrix product `self · other`.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator, Error> {
        self.check_size(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &PauliOperator) -> PauliOperator {
        // Z^b X^a' = (-1)^{b·a'} X^a' Z^b
        let swap = (self.z.and_count(&other.x) % 2) as u8;
        PauliOperator {
            phase: (self.phase + other.phase + 2 * swap) % 4,
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
        }
    }

    /// In-place `self ← self · other`.
    pub(crate) fn mul_assign_right(&mut self, other: &PauliOperator) {
        let swap = (self.z.and_count(&other.x) % 2) as u8;
        self.phase = (self.phase + other.phase + 2 * swap) % 4;
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }

    pub fn commutes(&self, other: &PauliOperator) -> Result<bool, Error> {
        self.check_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliOperator) -> bool {
        (self.x.and_count(&other.z) + self.z.and_count(&other.x)).is_multiple_of(2)
    }

    /// Hermitian iff `t ≡ a·b (mod 2)`, i.e. the overall coefficient in front
    /// of the tensor product of `I, X, Y, Z` is `±1`.
    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + self.x.and_count(&self.z)).is_multiple_of(2)
    }

    /// `±` a product of `Z`s and identities.
    pub fn is_z_type(&self) -> bool {
        self.x.is_zero() && self.phase.is_multiple_of(2)
    }

    /// `±` a product of `X`s and identities.
    pub fn is_x_type(&self) -> bool {
        self.z.is_zero() && self.phase.is_multiple_of(2)
    }

    /// `P|y⟩ = i^t (-1)^{b·y} |y ⊕ a⟩`.
    pub fn act_on_basis(&self, y: &BitString) -> BasisAction {
        let sign = (self.z.and_count(y) % 2) as u8;
        BasisAction {
            phase: (self.phase + 2 * sign) % 4,
            state: y.xor(&self.x),
        }
    }

    /// The operator times `i^k`.
    pub fn times_i_pow(&self, k: u8) -> PauliOperator {
        let mut out = self.clone();
        out.phase = (out.phase + k) % 4;
        out
    }

    pub fn negated(&self) -> PauliOperator {
        self.times_i_pow(2)
    }

    /// Hermitian conjugate.
    pub fn adjoint(&self) -> PauliOperator {
        // (i^t X^a Z^b)† = (-i)^t Z^b X^a = (-i)^t (-1)^{a·b} X^a Z^b
        let ab = (self.x.and_count(&self.z) % 2) as u8;
        let mut out = self.clone();
        out.phase = ((4 - self.phase) % 4 + 2 * ab) % 4;
        out
    }

    /// Parses `[+|-|i|+i|-i]` followed by `n` letters from `IXYZ`.
    pub fn parse(s: &str) -> Result<PauliOperator, ParseError> {
        let s = s.trim();
        let (sign, body) = split_sign(s);
        if body.is_empty() {
            return Err(ParseError::new(0, format!("empty Pauli string '{s}'")));
        }
        let n = body.chars().count();
        let mut p = PauliOperator::identity(n);
        let mut ys = 0u8;
        for (q, ch) in body.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => p.x.set(q, true),
                'Z' => p.z.set(q, true),
                'Y' => {
                    p.x.set(q, true);
                    p.z.set(q, true);
                    ys = (ys + 1) % 4;
                }
                other => {
                    return Err(ParseError::new(
                        0,
                        format!("invalid Pauli letter '{other}' in '{s}'"),
                    ))
                }
            }
        }
        // each Y contributes i: Y = iXZ
        p.phase = (sign + ys) % 4;
        Ok(p)
    }

    /// Inverse of [`PauliOperator::parse`]; the sign is one of `+`, `-`, `+i`, `-i`.
    pub fn format(&self) -> String {
        let mut body = String::with_capacity(self.num_qubits());
        let mut ys = 0u8;
        for q in 0..self.num_qubits() {
            body.push(match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => {
                    ys = (ys + 1) % 4;
                    'Y'
                }
            });
        }
        let coeff = (self.phase + 4 - ys) % 4;
        let sign = match coeff {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        format!("{sign}{body}")
    }
}

fn split_sign(s: &str) -> (u8, &str) {
    let (neg, rest) = if let Some(r) = s.strip_prefix('-') {
        (true, r)
    } else if let Some(r) = s.strip_prefix('\u{2212}') {
        (true, r)
    } else if let Some(r) = s.strip_prefix('+') {
        (false, r)
    } else {
        (false, s)
    };
    let (imag, rest) = match rest.strip_prefix('i') {
        Some(r) => (true, r),
        None => (false, rest),
    };
    let exp = match (neg, imag) {
        (false, false) => 0,
        (false, true) => 1,
        (true, false) => 2,
        (true, true) => 3,
    };
    (exp, rest)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pauli({})", self.format())
    }
}

impl FromStr for PauliOperator {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PauliOperator::parse(s)
    }
}

/// Parses a Pauli-list file: one signed Pauli string per line, `#` comments.
pub fn parse_pauli_list(text: &str) -> Result<Vec<PauliOperator>, ParseError> {
    let mut out: Vec<PauliOperator> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let p = PauliOperator::parse(line).map_err(|e| ParseError::new(lineno + 1, e.message))?;
        if let Some(first) = out.first() {
            if first.num_qubits() != p.num_qubits() {
                return Err(ParseError::new(
                    lineno + 1,
                    format!(
                        "expected {} qubits, found {}",
                        first.num_qubits(),
                        p.num_qubits()
                    ),
                ));
            }
        }
        out.push(p);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliOperator {
        PauliOperator::parse(s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        let x = p("X");
        let z = p("Z");
        let xz = x.multiply(&z).unwrap();
        assert_eq!((xz.phase(), xz.x_part().get(0), xz.z_part().get(0)), (0, true, true));
        let zx = z.multiply(&x).unwrap();
        assert_eq!((zx.phase(), zx.x_part().get(0), zx.z_part().get(0)), (2, true, true));
        let yy = p("Y").multiply(&p("Y")).unwrap();
        assert_eq!(yy, PauliOperator::identity(1));
    }

    #[test]
    fn multiply_rejects_size_mismatch() {
        assert!(matches!(
            p("XX").multiply(&p("Z")),
            Err(Error::SizeMismatch(2, 1))
        ));
    }

    #[test]
    fn commutation_examples() {
        assert!(p("X").commutes(&p("X")).unwrap());
        assert!(!p("X").commutes(&p("Z")).unwrap());
        // neighbouring cluster stabilisers
        assert!(p("XZ").commutes(&p("ZX")).unwrap());
    }

    #[test]
    fn hermiticity_and_types() {
        let zz = p("ZIZ");
        assert!(zz.is_hermitian() && zz.is_z_type() && !zz.is_x_type());
        let xz = PauliOperator::from_parts(
            0,
            BitString::parse("1").unwrap(),
            BitString::parse("1").unwrap(),
        );
        assert!(!xz.is_hermitian());
        let y = p("Y");
        assert_eq!(y.phase(), 1);
        assert!(y.is_hermitian() && !y.is_z_type() && !y.is_x_type());
        assert!(p("-Z").is_z_type());
        assert!(!p("iZ").is_z_type());
    }

    #[test]
    fn basis_action_examples() {
        let one = BitString::parse("1").unwrap();
        let zero = BitString::parse("0").unwrap();
        assert_eq!(
            p("Z").act_on_basis(&one),
            BasisAction { phase: 2, state: one.clone() }
        );
        assert_eq!(
            p("X").act_on_basis(&zero),
            BasisAction { phase: 0, state: one.clone() }
        );
        let r = p("XZ").act_on_basis(&BitString::parse("01").unwrap());
        assert_eq!(r.phase, 2);
        assert_eq!(r.state.to_string(), "11");
    }

    #[test]
    fn parse_examples() {
        let xz = p("+XZ");
        assert_eq!(xz.phase(), 0);
        assert_eq!(xz.x_part().to_string(), "10");
        assert_eq!(xz.z_part().to_string(), "01");
        let mz = p("-Z");
        assert_eq!((mz.phase(), mz.x_part().to_string(), mz.z_part().to_string()), (2, "0".into(), "1".into()));
        let yi = p("+YI");
        assert_eq!((yi.phase(), yi.x_part().to_string(), yi.z_part().to_string()), (1, "10".into(), "10".into()));
        assert!(PauliOperator::parse("+XQ").is_err());
        assert!(PauliOperator::parse("-").is_err());
    }

    #[test]
    fn format_round_trips() {
        for s in ["+XZ", "-Z", "+YI", "+iXY", "-iZZYI", "+I"] {
            assert_eq!(p(s).format(), s);
        }
        assert_eq!(p("Y").format(), "+Y");
    }

    #[test]
    fn adjoint_undoes_phase() {
        for s in ["+iXZ", "-iY", "+XY", "-iZ"] {
            let a = p(s);
            let prod = a.multiply(&a.adjoint()).unwrap();
            assert_eq!(prod, PauliOperator::identity(a.num_qubits()), "{s}");
        }
    }

    #[test]
    fn pauli_list_reports_line_numbers() {
        let text = "# cluster\n+XZI\n+ZXZ\n\n+IZQ\n";
        let err = parse_pauli_list(text).unwrap_err();
        assert_eq!(err.line, 5);
        let ok = parse_pauli_list("+XZ\n-ZX\n").unwrap();
        assert_eq!(ok.len(), 2);
    }
}
