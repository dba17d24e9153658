//! Symmetric and generalized symmetric eigensolvers.
//!
//! The standard problem is solved with cyclic Jacobi rotations. The
//! generalized problem `lhs·a = λ·rhs·a` is reduced to standard form through
//! the Cholesky factor of `rhs`: with `rhs = L·Lᵀ`, the eigenpairs of
//! `L⁻¹·lhs·L⁻ᵀ` give `a = L⁻ᵀ·v`, which is `rhs`-orthonormal.
//!
//! Pair ordering is deterministic: ascending eigenvalue, and within a group of
//! values equal to `1e-10` relative (or within rounding noise of the spectral
//! radius), ascending index of each vector's largest-magnitude component. Every returned vector is signed
//! so that this component is positive.

use std::cmp::Ordering;

use super::cholesky::{cholesky, LowerTriangular};
use super::matrix::Matrix;
use super::sym::SymMatrix;
use crate::error::{DfsError, Result};
use crate::scalar::Scalar;

pub const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const TIE_TOL: f64 = 1e-10;

/// Eigenpairs, values ascending; column `j` of `vectors` pairs with `values[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigPairs<T> {
    pub values: Vec<T>,
    pub vectors: Matrix<T>,
}

impl<T: Scalar> EigPairs<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> Vec<T> {
        self.vectors.col(j)
    }
}

/// Jacobi sweep statistics, mostly for diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JacobiStats {
    pub sweeps: usize,
    pub converged: bool,
}

/// Raw cyclic Jacobi: returns unsorted eigenvalues (the final diagonal) and
/// the accumulated rotation matrix whose columns are the eigenvectors.
///
/// An off-diagonal entry counts as negligible once it is below
/// `1e-12·sqrt(|a_pp·a_qq|)` or below one machine epsilon of `‖m‖_F`. The
/// relative test keeps small eigenvalues accurate when the diagonal spans
/// many orders of magnitude, which a single Frobenius threshold does not.
pub fn jacobi_raw<T: Scalar>(m: &SymMatrix<T>) -> (Vec<T>, Matrix<T>, JacobiStats) {
    let n = m.order();
    let mut a = m.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let rel = T::tol(OFF_DIAGONAL_TOL, 4.0);
    let floor = T::epsilon() * a.frobenius();
    let negligible = |a: &Matrix<T>, p: usize, q: usize| {
        let apq = a[(p, q)].abs();
        apq <= floor || apq <= rel * (a[(p, p)] * a[(q, q)]).abs().sqrt()
    };

    let mut stats = JacobiStats { sweeps: 0, converged: false };
    while stats.sweeps < MAX_SWEEPS {
        stats.sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                if negligible(&a, p, q) {
                    continue;
                }
                rotated = true;
                let apq = a[(p, q)];
                let theta = (a[(q, q)] - a[(p, p)]) / (T::lit(2.0) * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(T::one()));
                let c = T::one() / t.hypot(T::one());
                let s = t * c;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let new_kp = c * akp - s * akq;
                    let new_kq = s * akp + c * akq;
                    a[(k, p)] = new_kp;
                    a[(p, k)] = new_kp;
                    a[(k, q)] = new_kq;
                    a[(q, k)] = new_kq;
                }
                a[(p, p)] -= t * apq;
                a[(q, q)] += t * apq;
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        if !rotated {
            stats.converged = true;
            break;
        }
    }
    if !stats.converged {
        log::warn!("Jacobi did not reach tolerance within {MAX_SWEEPS} sweeps (order {n})");
    }
    let values = (0..n).map(|i| a[(i, i)]).collect();
    (values, v, stats)
}

/// Full spectrum of a symmetric matrix with deterministic ordering.
pub fn symmetric_eigen<T: Scalar>(m: &SymMatrix<T>) -> EigPairs<T> {
    let (values, vectors, _) = jacobi_raw(m);
    order_pairs(values, vectors)
}

/// Sorts eigenpairs ascending, applies the tie-break and the sign convention.
pub fn order_pairs<T: Scalar>(values: Vec<T>, vectors: Matrix<T>) -> EigPairs<T> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| total_cmp(values[a], values[b]).then(a.cmp(&b)));

    let pivots: Vec<usize> = (0..n).map(|j| pivot_component(&vectors, j)).collect();
    let radius = values.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let noise = T::epsilon() * T::lit(16.0) * radius;
    let rel = T::tol(TIE_TOL, 16.0);

    let mut start = 0;
    while start < n {
        let tie = noise.max(rel * values[idx[start]].abs());
        let mut end = start + 1;
        while end < n && values[idx[end]] - values[idx[start]] <= tie {
            end += 1;
        }
        idx[start..end].sort_by_key(|&j| (pivots[j], j));
        start = end;
    }

    let mut out_vectors = Matrix::zeros(vectors.rows(), n);
    let mut out_values = Vec::with_capacity(n);
    for (dst, &src) in idx.iter().enumerate() {
        out_values.push(values[src]);
        let flip = vectors[(pivots[src], src)] < T::zero();
        for i in 0..vectors.rows() {
            let x = vectors[(i, src)];
            out_vectors[(i, dst)] = if flip { -x } else { x };
        }
    }
    EigPairs { values: out_values, vectors: out_vectors }
}

/// Row index of the first largest-magnitude entry of column `j`.
fn pivot_component<T: Scalar>(vectors: &Matrix<T>, j: usize) -> usize {
    let mut best = 0;
    let mut best_abs = T::neg_infinity();
    for i in 0..vectors.rows() {
        let a = vectors[(i, j)].abs();
        if a > best_abs {
            best = i;
            best_abs = a;
        }
    }
    best
}

fn total_cmp<T: Scalar>(a: T, b: T) -> Ordering {
    a.partial_cmp(&b).unwrap_or_else(|| a.is_nan().cmp(&b.is_nan()))
}

/// A generalized symmetric-definite eigensolver with a fixed, pre-factored
/// right-hand side. Factoring once lets an iterative caller reuse `rhs`.
#[derive(Debug, Clone)]
pub struct GeneralizedEigen<T> {
    factor: LowerTriangular<T>,
}

impl<T: Scalar> GeneralizedEigen<T> {
    pub fn new(rhs: &SymMatrix<T>) -> Result<Self> {
        Ok(Self { factor: cholesky(rhs)? })
    }

    pub fn order(&self) -> usize {
        self.factor.order()
    }

    pub fn factor(&self) -> &LowerTriangular<T> {
        &self.factor
    }

    /// The `l` algebraically smallest eigenpairs of `lhs·a = λ·rhs·a`.
    pub fn smallest(&self, lhs: &SymMatrix<T>, l: usize) -> Result<EigPairs<T>> {
        let n = self.order();
        if lhs.order() != n {
            return Err(DfsError::DimensionMismatch(format!("lhs has order {}, rhs has order {n}", lhs.order())));
        }
        if l == 0 || l > n {
            return Err(DfsError::DimensionMismatch(format!("requested {l} eigenpairs of an order-{n} problem")));
        }
        // C = L⁻¹ · lhs · L⁻ᵀ = L⁻¹ · (L⁻¹ · lhs)ᵀ
        let y = self.factor.solve_lower(lhs.as_matrix())?;
        let c = self.factor.solve_lower(&y.transpose())?;
        let c = SymMatrix::from_lower_fn(n, |i, j| T::lit(0.5) * (c[(i, j)] + c[(j, i)]))?;

        let (values, v, _) = jacobi_raw(&c);
        let a = self.factor.solve_upper_transposed(&v)?;
        let all = order_pairs(values, a);
        let keep: Vec<usize> = (0..l).collect();
        Ok(EigPairs { values: all.values[..l].to_vec(), vectors: all.vectors.select_cols(&keep) })
    }
}

/// One-shot form of [`GeneralizedEigen::smallest`].
pub fn generalized_eig_smallest<T: Scalar>(lhs: &SymMatrix<T>, rhs: &SymMatrix<T>, l: usize) -> Result<EigPairs<T>> {
    if lhs.order() != rhs.order() {
        return Err(DfsError::DimensionMismatch(format!(
            "lhs has order {}, rhs has order {}",
            lhs.order(),
            rhs.order()
        )));
    }
    GeneralizedEigen::new(rhs)?.smallest(lhs, l)
}

/// `‖lhs·a − λ·rhs·a‖₂` for one pair.
pub fn pair_residual<T: Scalar>(lhs: &SymMatrix<T>, rhs: &SymMatrix<T>, value: T, vector: &[T]) -> Result<T> {
    let la = lhs.matvec(vector)?;
    let ra = rhs.matvec(vector)?;
    Ok(la.iter().zip(&ra).map(|(&x, &y)| (x - value * y) * (x - value * y)).sum::<T>().sqrt())
}
