//! Dense complex linear algebra for the two dimensions this crate needs:
//! single-qubit (2) and two-qubit (4) operators and vectors.
//!
//! Two-qubit basis ordering is `|m1 m2>` at index `2*m1 + m2`, where `m = 0`
//! is the +1 eigenstate of sigma_z.

use num_complex::Complex64;
use thiserror::Error;

/// Default tolerance for structural predicates.
pub const DEFAULT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("unsupported dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),
    #[error("entry count {len} does not fit dimension {dim}")]
    BadLength { dim: usize, len: usize },
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
}

fn check_dim(dim: usize) -> Result<(), LinalgError> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(LinalgError::UnsupportedDimension(d)),
    }
}

fn check_finite(entries: &[Complex64]) -> Result<(), LinalgError> {
    match entries
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(i) => Err(LinalgError::NonFinite(i)),
        None => Ok(()),
    }
}

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Column vector of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct CVector {
    entries: Vec<Complex64>,
}

impl CVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        check_dim(entries.len())?;
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    /// Real-valued vector, convenient for the exact states used throughout.
    pub fn from_real(values: &[f64]) -> Result<Self, LinalgError> {
        Self::new(values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self, LinalgError> {
        check_dim(dim)?;
        Ok(Self {
            entries: vec![Complex64::new(0.0, 0.0); dim],
        })
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self, LinalgError> {
        let mut v = Self::zeros(dim)?;
        if index >= dim {
            return Err(LinalgError::DimensionMismatch {
                expected: dim,
                actual: index,
            });
        }
        v.entries[index] = c(1.0, 0.0);
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Complex64 {
        self.entries[i]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        same_dim(self.dim(), other.dim())?;
        Ok(Self {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Unit vector in the same direction, or `None` when the norm is below `min_norm`.
    pub fn normalized(&self, min_norm: f64) -> Option<Self> {
        let n = self.norm();
        if n < min_norm || !n.is_finite() {
            return None;
        }
        Some(self.scale(c(1.0 / n, 0.0)))
    }

    /// Rotates the global phase so that the first entry with modulus above
    /// `tol` is real and positive.
    pub fn with_canonical_phase(&self, tol: f64) -> Self {
        match self.entries.iter().find(|z| z.norm() > tol) {
            Some(z) => {
                let phase = z.conj() / z.norm();
                let mut out = self.scale(phase);
                // The rotated pivot is real by construction; drop rounding dust.
                if let Some(p) = out.entries.iter_mut().find(|z| z.norm() > tol) {
                    *p = c(p.norm(), 0.0);
                }
                out
            }
            None => self.clone(),
        }
    }

    /// Outer product `|self><other|`.
    pub fn outer(&self, other: &Self) -> Result<CMatrix, LinalgError> {
        same_dim(self.dim(), other.dim())?;
        let dim = self.dim();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(self.entries[i] * other.entries[j].conj());
            }
        }
        Ok(CMatrix { dim, entries })
    }
}

/// Row-major square matrix of dimension 2 or 4.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl CMatrix {
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self, LinalgError> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(LinalgError::BadLength {
                dim,
                len: entries.len(),
            });
        }
        check_finite(&entries)?;
        Ok(Self { dim, entries })
    }

    pub fn from_real(dim: usize, values: &[f64]) -> Result<Self, LinalgError> {
        Self::new(dim, values.iter().map(|&x| c(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self, LinalgError> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            entries: vec![c(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = c(1.0, 0.0);
        }
        Ok(m)
    }

    pub fn diag_real(values: &[f64]) -> Result<Self, LinalgError> {
        let dim = values.len();
        let mut m = Self::zeros(dim)?;
        for (i, &v) in values.iter().enumerate() {
            m.entries[i * dim + i] = c(v, 0.0);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self, LinalgError> {
        same_dim(self.dim, other.dim)?;
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, LinalgError> {
        Ok(self.sub(other)?.max_abs())
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        matches!(self.max_abs_diff(other), Ok(d) if d <= tol)
    }

    pub fn column(&self, col: usize) -> CVector {
        CVector {
            entries: (0..self.dim).map(|r| self.get(r, col)).collect(),
        }
    }
}

fn same_dim(expected: usize, actual: usize) -> Result<(), LinalgError> {
    if expected == actual {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { expected, actual })
    }
}

/// Kronecker product of two single-qubit operators. Row index of the result is
/// `2*r1 + r2`, column index `2*c1 + c2`.
pub fn tensor(m1: &CMatrix, m2: &CMatrix) -> Result<CMatrix, LinalgError> {
    same_dim(2, m1.dim)?;
    same_dim(2, m2.dim)?;
    let mut entries = vec![c(0.0, 0.0); 16];
    for r1 in 0..2 {
        for c1 in 0..2 {
            for r2 in 0..2 {
                for c2 in 0..2 {
                    entries[(2 * r1 + r2) * 4 + (2 * c1 + c2)] = m1.get(r1, c1) * m2.get(r2, c2);
                }
            }
        }
    }
    Ok(CMatrix { dim: 4, entries })
}

pub fn matvec(m: &CMatrix, v: &CVector) -> Result<CVector, LinalgError> {
    same_dim(m.dim, v.dim())?;
    let entries = (0..m.dim)
        .map(|r| (0..m.dim).map(|k| m.get(r, k) * v.entries[k]).sum())
        .collect();
    Ok(CVector { entries })
}

pub fn matmul(m1: &CMatrix, m2: &CMatrix) -> Result<CMatrix, LinalgError> {
    same_dim(m1.dim, m2.dim)?;
    let n = m1.dim;
    let mut entries = Vec::with_capacity(n * n);
    for r in 0..n {
        for col in 0..n {
            entries.push((0..n).map(|k| m1.get(r, k) * m2.get(k, col)).sum());
        }
    }
    Ok(CMatrix { dim: n, entries })
}

/// Conjugate transpose.
pub fn adjoint(m: &CMatrix) -> CMatrix {
    let n = m.dim;
    let mut entries = Vec::with_capacity(n * n);
    for r in 0..n {
        for col in 0..n {
            entries.push(m.get(col, r).conj());
        }
    }
    CMatrix { dim: n, entries }
}

/// `<v1|v2>`, conjugate-linear in the first argument.
pub fn inner(v1: &CVector, v2: &CVector) -> Result<Complex64, LinalgError> {
    same_dim(v1.dim(), v2.dim())?;
    Ok(v1
        .entries
        .iter()
        .zip(&v2.entries)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Commutator `m1 m2 - m2 m1`.
pub fn commutator(m1: &CMatrix, m2: &CMatrix) -> Result<CMatrix, LinalgError> {
    matmul(m1, m2)?.sub(&matmul(m2, m1)?)
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.approx_eq(&adjoint(m), tol)
}

pub fn is_projector(m: &CMatrix, tol: f64) -> bool {
    is_hermitian(m, tol) && matches!(matmul(m, m), Ok(sq) if sq.approx_eq(m, tol))
}

/// Pauli sigma_z = diag(+1, -1).
pub fn sigma_z() -> CMatrix {
    CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("static shape")
}

/// Pauli sigma_x = antidiag(+1, +1).
pub fn sigma_x() -> CMatrix {
    CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("static shape")
}

/// Pauli sigma_y = [[0, -i], [i, 0]].
pub fn sigma_y() -> CMatrix {
    CMatrix::new(2, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
        .expect("static shape")
}
