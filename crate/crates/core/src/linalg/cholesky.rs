use super::matrix::Matrix;
use super::sym::SymMatrix;
use crate::error::{DfsError, Result};
use crate::scalar::Scalar;

/// Lower-triangular Cholesky factor `L` with `L·Lᵀ = m`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerTriangular<T> {
    factor: Matrix<T>,
}

/// Factors a symmetric positive definite matrix.
///
/// Fails with [`DfsError::NotPositiveDefinite`] on the first pivot that is not
/// strictly positive and finite.
pub fn cholesky<T: Scalar>(m: &SymMatrix<T>) -> Result<LowerTriangular<T>> {
    let n = m.order();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = m.get(j, j);
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !(pivot > T::zero()) || !pivot.is_finite() {
            return Err(DfsError::NotPositiveDefinite { index: j, pivot: pivot.to_f64_lossy() });
        }
        let diag = pivot.sqrt();
        l[(j, j)] = diag;
        for i in (j + 1)..n {
            let mut s = m.get(i, j);
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / diag;
        }
    }
    Ok(LowerTriangular { factor: l })
}

impl<T: Scalar> LowerTriangular<T> {
    pub fn order(&self) -> usize {
        self.factor.rows()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.factor
    }

    /// `L · Lᵀ`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.factor.matmul(&self.factor.transpose()).expect("square factor")
    }

    /// Solves `L · X = B` for every column of `B` at once.
    pub fn solve_lower(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.order();
        if b.rows() != n {
            return Err(DfsError::DimensionMismatch(format!(
                "right-hand side has {} rows, factor has order {n}",
                b.rows()
            )));
        }
        let mut x = b.clone();
        for i in 0..n {
            for k in 0..i {
                let lik = self.factor[(i, k)];
                if lik == T::zero() {
                    continue;
                }
                let (done, rest) = x.row_pair_mut(k, i);
                for (xi, &xk) in rest.iter_mut().zip(done) {
                    *xi -= lik * xk;
                }
            }
            let d = self.factor[(i, i)];
            for v in x.row_mut(i) {
                *v /= d;
            }
        }
        Ok(x)
    }

    /// Solves `Lᵀ · X = B` for every column of `B` at once.
    pub fn solve_upper_transposed(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        let n = self.order();
        if b.rows() != n {
            return Err(DfsError::DimensionMismatch(format!(
                "right-hand side has {} rows, factor has order {n}",
                b.rows()
            )));
        }
        let mut x = b.clone();
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                let lki = self.factor[(k, i)];
                if lki == T::zero() {
                    continue;
                }
                let (done, rest) = x.row_pair_mut(k, i);
                for (xi, &xk) in rest.iter_mut().zip(done) {
                    *xi -= lki * xk;
                }
            }
            let d = self.factor[(i, i)];
            for v in x.row_mut(i) {
                *v /= d;
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(rows: &[&[f64]]) -> SymMatrix<f64> {
        SymMatrix::try_from_dense(&Matrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn identity_factor() {
        let l = cholesky(&SymMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(l.as_matrix(), &Matrix::identity(3));
    }

    #[test]
    fn two_by_two() {
        let m = sym(&[&[4.0, 2.0], &[2.0, 3.0]]);
        let l = cholesky(&m).unwrap();
        let expected = Matrix::from_rows(&[[2.0, 0.0], [1.0, 2f64.sqrt()]]).unwrap();
        assert!(l.as_matrix().max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(l.reconstruct().max_abs_diff(m.as_matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn indefinite_rejected() {
        let m = sym(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(cholesky(&m), Err(DfsError::NotPositiveDefinite { index: 1, .. })));
    }

    #[test]
    fn triangular_solves_invert_factor() {
        let m = sym(&[&[5.0, 1.0, 0.5], &[1.0, 4.0, 0.2], &[0.5, 0.2, 3.0]]);
        let l = cholesky(&m).unwrap();
        let b = Matrix::from_fn(3, 2, |i, j| (i + 2 * j) as f64 - 1.0);
        let y = l.solve_lower(&b).unwrap();
        assert!(l.as_matrix().matmul(&y).unwrap().max_abs_diff(&b).unwrap() < 1e-13);
        let z = l.solve_upper_transposed(&b).unwrap();
        let back = l.as_matrix().transpose().matmul(&z).unwrap();
        assert!(back.max_abs_diff(&b).unwrap() < 1e-13);
    }

    #[test]
    fn f32_factorization() {
        let m = SymMatrix::<f32>::from_lower_fn(2, |i, j| if i == j { 4.0 } else { 2.0 }).unwrap();
        let l = cholesky(&m).unwrap();
        assert!(l.reconstruct().max_abs_diff(m.as_matrix()).unwrap() < 1e-5);
    }
}
