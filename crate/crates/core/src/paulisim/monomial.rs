//! Monomial operators: `U|x⟩ = λ_x |π(x)⟩`.

use crate::bits::BitString;
use crate::linalg::{i_pow, C64};
use crate::pauli::PauliOperator;

/// An efficiently computable monomial unitary on `n` qubits.
pub trait MonomialOperator: Send + Sync {
    fn num_qubits(&self) -> usize;

    /// Replaces `x` by `π(x)` and returns `λ_x`.
    fn act(&self, x: &mut BitString) -> C64;

    /// Replaces `x` by `π⁻¹(x)`.
    fn act_inv(&self, x: &mut BitString);

    /// `λ_x`.
    fn eval_phase(&self, x: &BitString) -> C64 {
        let mut y = x.clone();
        self.act(&mut y)
    }

    /// `π(x)`.
    fn permute(&self, x: &BitString) -> BitString {
        let mut y = x.clone();
        self.act(&mut y);
        y
    }

    /// `π⁻¹(x)`.
    fn permute_inv(&self, x: &BitString) -> BitString {
        let mut y = x.clone();
        self.act_inv(&mut y);
        y
    }
}

/// `e^{iθQ}` for a Hermitian Z-type Pauli operator `Q = ±Z^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalZExp {
    theta: f64,
    q: PauliOperator,
}

impl DiagonalZExp {
    /// Panics unless `q` is Z-type.
    pub fn new(theta: f64, q: PauliOperator) -> DiagonalZExp {
        assert!(q.is_z_type(), "DiagonalZExp needs a Z-type operator, got {q}");
        DiagonalZExp { theta, q }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn operator(&self) -> &PauliOperator {
        &self.q
    }

    /// The inverse `e^{-iθQ}`.
    pub fn adjoint(&self) -> DiagonalZExp {
        DiagonalZExp {
            theta: -self.theta,
            q: self.q.clone(),
        }
    }

    /// Rotation angle `θ·(±1)·(-1)^{b·x}` at basis state `x`.
    #[inline]
    fn angle(&self, x: &BitString) -> f64 {
        let mut s = if self.q.phase() == 2 { -self.theta } else { self.theta };
        if self.q.z_part().dot(x) {
            s = -s;
        }
        s
    }
}

impl MonomialOperator for DiagonalZExp {
    fn num_qubits(&self) -> usize {
        self.q.num_qubits()
    }

    fn act(&self, x: &mut BitString) -> C64 {
        let (s, c) = self.angle(x).sin_cos();
        C64::new(c, s)
    }

    fn act_inv(&self, _x: &mut BitString) {}
}

/// A product of commuting diagonal exponentials `Π_j e^{iθ_j Q_j}`. The
/// phases are summed as angles and exponentiated once.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalProduct {
    n: usize,
    /// Z-part and signed angle of each factor.
    factors: Vec<(BitString, f64)>,
}

impl DiagonalProduct {
    pub fn new(n: usize, gates: &[DiagonalZExp]) -> DiagonalProduct {
        let factors = gates
            .iter()
            .map(|g| {
                let t = if g.q.phase() == 2 { -g.theta } else { g.theta };
                (g.q.z_part().clone(), t)
            })
            .collect();
        DiagonalProduct { n, factors }
    }

    pub fn adjoint(&self) -> DiagonalProduct {
        DiagonalProduct {
            n: self.n,
            factors: self.factors.iter().map(|(b, t)| (b.clone(), -t)).collect(),
        }
    }

    #[inline]
    pub(crate) fn angle(&self, x: &BitString) -> f64 {
        self.factors
            .iter()
            .map(|(b, t)| if b.dot(x) { -t } else { *t })
            .sum()
    }
}

impl MonomialOperator for DiagonalProduct {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn act(&self, x: &mut BitString) -> C64 {
        let (s, c) = self.angle(x).sin_cos();
        C64::new(c, s)
    }

    fn act_inv(&self, _x: &mut BitString) {}
}

/// A Pauli operator as a monomial: `P|x⟩ = i^t (-1)^{b·x} |x ⊕ a⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliMonomial(pub PauliOperator);

impl PauliMonomial {
    #[inline]
    pub(crate) fn quarter_turns(&self, x: &mut BitString) -> u8 {
        let p = &self.0;
        let k = (p.phase() as u32 + 2 * p.z_part().and_count(x)) % 4;
        x.xor_assign(p.x_part());
        k as u8
    }
}

impl MonomialOperator for PauliMonomial {
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    fn act(&self, x: &mut BitString) -> C64 {
        i_pow(self.quarter_turns(x))
    }

    fn act_inv(&self, x: &mut BitString) {
        x.xor_assign(self.0.x_part());
    }
}

/// `U_k ⋯ U_2 U_1` for the list `[U_1, U_2, …, U_k]`: the first element
/// acts first.
pub struct Composition {
    n: usize,
    parts: Vec<Box<dyn MonomialOperator>>,
}

impl Composition {
    pub fn new(n: usize, parts: Vec<Box<dyn MonomialOperator>>) -> Composition {
        assert!(parts.iter().all(|p| p.num_qubits() == n), "monomial sizes differ");
        Composition { n, parts }
    }
}

impl MonomialOperator for Composition {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn act(&self, x: &mut BitString) -> C64 {
        let mut lambda = C64::new(1.0, 0.0);
        for p in &self.parts {
            lambda *= p.act(x);
        }
        lambda
    }

    fn act_inv(&self, x: &mut BitString) {
        for p in self.parts.iter().rev() {
            p.act_inv(x);
        }
    }
}

/// `D_left · P · D_right · R` (R acts first): the monomial used by the Pauli
/// circuit simulators, with all diagonal angles folded into one exponential.
#[derive(Clone, Debug)]
pub struct PauliSandwich {
    pub(crate) right_pauli: PauliMonomial,
    pub(crate) right_diag: DiagonalProduct,
    pub(crate) middle: PauliMonomial,
    pub(crate) left_diag: DiagonalProduct,
}

impl PauliSandwich {
    pub fn new(r: PauliOperator, d_right: DiagonalProduct, p: PauliOperator, d_left: DiagonalProduct) -> PauliSandwich {
        PauliSandwich {
            right_pauli: PauliMonomial(r),
            right_diag: d_right,
            middle: PauliMonomial(p),
            left_diag: d_left,
        }
    }
}

impl MonomialOperator for PauliSandwich {
    fn num_qubits(&self) -> usize {
        self.middle.num_qubits()
    }

    fn act(&self, x: &mut BitString) -> C64 {
        let mut k = self.right_pauli.quarter_turns(x);
        let mut angle = self.right_diag.angle(x);
        k += self.middle.quarter_turns(x);
        angle += self.left_diag.angle(x);
        let (s, c) = angle.sin_cos();
        C64::new(c, s) * i_pow(k % 4)
    }

    fn act_inv(&self, x: &mut BitString) {
        self.middle.act_inv(x);
        self.right_pauli.act_inv(x);
    }
}
