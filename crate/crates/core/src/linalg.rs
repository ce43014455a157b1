//! Small dense complex linear algebra on qudit registers.
//!
//! Basis ordering is big-endian: the first listed qudit is the most
//! significant digit of the basis index.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::pauli::PauliOperator;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// `i^k` for `k ∈ Z₄`.
#[inline]
pub fn i_pow(k: u8) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}

pub fn pow_usize(base: usize, exp: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn unitarity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    frobenius(&(m.adjoint() * m - CMatrix::identity(n, n)))
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    frobenius(&(m.adjoint() - m))
}

pub fn hadamard() -> CMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[C64::new(h, 0.0), C64::new(h, 0.0), C64::new(h, 0.0), C64::new(-h, 0.0)])
}

pub fn diag(entries: &[C64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

/// The block matrix `|0⟩⟨0| ⊗ a + |1⟩⟨1| ⊗ b`.
pub fn block_diag2(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(b.nrows(), n);
    let mut out = CMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (n, n)).copy_from(b);
    out
}

/// Precomputed plan for applying a `d^k × d^k` matrix to selected digits of a
/// `d^n` vector by index arithmetic.
pub struct LocalPlan {
    offsets: Vec<usize>,
    bases: Vec<usize>,
    rows: Vec<C64>,
    dim: usize,
}

impl LocalPlan {
    /// `positions` are digit positions (0 = most significant) in a register
    /// of `n` digits; `matrix` is in the tensor order of `positions`.
    pub fn new(n: usize, d: usize, positions: &[usize], matrix: &CMatrix) -> LocalPlan {
        let k = positions.len();
        let dim = pow_usize(d, k).expect("local dimension overflow");
        assert_eq!(matrix.nrows(), dim, "matrix does not match wire count");
        let stride = |q: usize| pow_usize(d, n - 1 - q).unwrap();
        let mut offsets = vec![0usize; dim];
        for (m, off) in offsets.iter_mut().enumerate() {
            let mut rem = m;
            let mut acc = 0;
            for j in (0..k).rev() {
                acc += (rem % d) * stride(positions[j]);
                rem /= d;
            }
            *off = acc;
        }
        let free: Vec<usize> = (0..n).filter(|q| !positions.contains(q)).collect();
        let free_strides: Vec<usize> = free.iter().map(|&q| stride(q)).collect();
        let count = pow_usize(d, free.len()).unwrap();
        let mut bases = Vec::with_capacity(count);
        let mut digits = vec![0usize; free.len()];
        let mut base = 0usize;
        for _ in 0..count {
            bases.push(base);
            // odometer over the free digits, last one fastest
            for j in (0..free.len()).rev() {
                digits[j] += 1;
                base += free_strides[j];
                if digits[j] < d {
                    break;
                }
                base -= d * free_strides[j];
                digits[j] = 0;
            }
        }
        let mut rows = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                rows.push(matrix[(r, c)]);
            }
        }
        LocalPlan {
            offsets,
            bases,
            rows,
            dim,
        }
    }

    pub fn apply(&self, amps: &mut [C64]) {
        let dim = self.dim;
        let mut inbuf = vec![ZERO; dim];
        for &base in &self.bases {
            for (slot, off) in inbuf.iter_mut().zip(&self.offsets) {
                *slot = amps[base + off];
            }
            for r in 0..dim {
                let row = &self.rows[r * dim..(r + 1) * dim];
                let mut acc = ZERO;
                for (a, b) in row.iter().zip(&inbuf) {
                    acc += a * b;
                }
                amps[base + self.offsets[r]] = acc;
            }
        }
    }
}

/// Applies `matrix` (tensor order of `positions`) to the `d^n` vector `amps`.
pub fn apply_local(amps: &mut [C64], n: usize, d: usize, positions: &[usize], matrix: &CMatrix) {
    LocalPlan::new(n, d, positions, matrix).apply(amps);
}

/// Embeds a matrix on `wires` into the register spanned by `target`
/// (a superset of `wires`, in the given tensor order).
pub fn embed(matrix: &CMatrix, wires: &[usize], target: &[usize], d: usize) -> CMatrix {
    let positions: Vec<usize> = wires
        .iter()
        .map(|w| {
            target
                .iter()
                .position(|t| t == w)
                .expect("wire missing from target register")
        })
        .collect();
    let n = target.len();
    let dim = pow_usize(d, n).unwrap();
    let plan = LocalPlan::new(n, d, &positions, matrix);
    let mut out = CMatrix::zeros(dim, dim);
    let mut col = vec![ZERO; dim];
    for c in 0..dim {
        col.iter_mut().for_each(|z| *z = ZERO);
        col[c] = ONE;
        plan.apply(&mut col);
        for (r, z) in col.iter().enumerate() {
            out[(r, c)] = *z;
        }
    }
    out
}

/// Dense matrix of a Pauli operator restricted to `wires`, which must
/// cover its support. Includes the global phase.
pub fn pauli_matrix_on(p: &PauliOperator, wires: &[usize]) -> CMatrix {
    let k = wires.len();
    let dim = 1usize << k;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut phase = p.phase() as u32;
        let mut row = 0usize;
        for (j, &w) in wires.iter().enumerate() {
            let bit = (col >> (k - 1 - j)) & 1;
            if p.z_part().get(w) && bit == 1 {
                phase += 2;
            }
            let out_bit = bit ^ p.x_part().get(w) as usize;
            row |= out_bit << (k - 1 - j);
        }
        out[(row, col)] = i_pow((phase % 4) as u8);
    }
    out
}

/// Full `2^n × 2^n` matrix of a Pauli operator.
pub fn pauli_matrix(p: &PauliOperator) -> CMatrix {
    let wires: Vec<usize> = (0..p.num_qubits()).collect();
    pauli_matrix_on(p, &wires)
}

/// Permutes the tensor factors of a matrix from `from` wire order to `to`.
pub fn reorder(matrix: &CMatrix, from: &[usize], to: &[usize], d: usize) -> CMatrix {
    if from == to {
        return matrix.clone();
    }
    embed(matrix, from, to, d)
}
