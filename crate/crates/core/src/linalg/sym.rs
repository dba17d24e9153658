use serde::{Deserialize, Serialize};

use super::matrix::Matrix;
use crate::error::{DfsError, Result};
use crate::scalar::Scalar;

/// Square symmetric matrix.
///
/// The full square is stored, but every write goes through [`SymMatrix::set`]
/// (which mirrors) or through constructors that copy one triangle, so
/// `get(i, j) == get(j, i)` holds bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { inner: Matrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: Matrix::identity(n) }
    }

    pub fn diag(values: &[T]) -> Result<Self> {
        Self::check_finite(&Matrix::diag(values))?;
        Ok(Self { inner: Matrix::diag(values) })
    }

    /// Builds from `f(i, j)` evaluated on the lower triangle (`j <= i`).
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = f(i, j);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Self::check_finite(&m)?;
        Ok(Self { inner: m })
    }

    /// Copies the lower triangle of a square matrix, ignoring the upper one.
    pub fn from_lower(m: &Matrix<T>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(DfsError::DimensionMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Self::from_lower_fn(m.rows(), |i, j| m[(i, j)])
    }

    /// Accepts a square matrix whose transpose pairs agree to within
    /// `1e-12` relative to its largest entry; the lower triangle is kept.
    pub fn try_from_dense(m: &Matrix<T>) -> Result<Self> {
        if m.rows() != m.cols() {
            return Err(DfsError::DimensionMismatch(format!(
                "symmetric matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Self::check_finite(m)?;
        let bound = T::tol(1e-12, 16.0) * T::one().max(m.max_abs());
        for i in 0..m.rows() {
            for j in 0..i {
                if (m[(i, j)] - m[(j, i)]).abs() > bound {
                    return Err(DfsError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Self::from_lower(m)
    }

    fn check_finite(m: &Matrix<T>) -> Result<()> {
        match m.first_non_finite() {
            Some((row, col)) => Err(DfsError::NonFinite { row, col }),
            None => Ok(()),
        }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.inner.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.inner[(i, j)]
    }

    /// Writes `v` at `(i, j)` and `(j, i)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.inner[(i, j)] = v;
        self.inner[(j, i)] = v;
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn frobenius(&self) -> T {
        self.inner.frobenius()
    }

    pub fn trace(&self) -> T {
        self.inner.trace()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self { inner: self.inner.scaled(s) }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self { inner: self.inner.add(&other.inner)? })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { inner: self.inner.sub(&other.inner)? })
    }

    /// `self + shift * I`.
    pub fn shifted(&self, shift: T) -> Self {
        let mut out = self.clone();
        for i in 0..self.order() {
            out.inner[(i, i)] += shift;
        }
        out
    }

    /// `diag(values) * scale - self`.
    pub fn diag_minus(&self, values: &[T], scale: T) -> Result<Self> {
        if values.len() != self.order() {
            return Err(DfsError::DimensionMismatch(format!(
                "diagonal of length {} against order {}",
                values.len(),
                self.order()
            )));
        }
        let mut out = self.scaled(-T::one());
        for (i, &v) in values.iter().enumerate() {
            out.inner[(i, i)] += scale * v;
        }
        Ok(out)
    }

    /// `Aᵀ · self · A` for a tall `A` with `order` rows.
    pub fn congruence(&self, a: &Matrix<T>) -> Result<SymMatrix<T>> {
        let sa = self.inner.matmul(a)?;
        let prod = a.transpose().matmul(&sa)?;
        Self::from_lower(&prod)
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        self.inner.matvec(v)
    }
}
