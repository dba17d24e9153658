use serde::{Deserialize, Serialize};

use crate::error::{DfsError, Result};
use crate::linalg::{dot, norm2, Matrix, SymMatrix};
use crate::scalar::Scalar;

/// Row ℓ2 norms of `m` and the ℓ2,p power sum `Σᵢ ‖mⁱ‖₂ᵖ`.
pub fn row_norms_2p<T: Scalar>(m: &Matrix<T>, p: T) -> (Vec<T>, T) {
    let norms: Vec<T> = (0..m.rows()).map(|i| norm2(m.row(i))).collect();
    let sum = norms.iter().map(|&r| r.powf(p)).sum();
    (norms, sum)
}

/// Diagonal of the reweighting matrix `D`, one positive entry per feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightDiag<T> {
    pub diag: Vec<T>,
}

/// `dᵢᵢ = (p/2)·(‖aⁱ‖₂² + ζ)^{p/2 − 1}`.
pub fn update_weights<T: Scalar>(a: &Matrix<T>, p: T, zeta: T) -> WeightDiag<T> {
    let half_p = p / T::lit(2.0);
    let exponent = half_p - T::one();
    let diag = (0..a.rows())
        .map(|i| {
            let sq = dot(a.row(i), a.row(i));
            half_p * (sq + zeta).powf(exponent)
        })
        .collect();
    WeightDiag { diag }
}

/// `tr(aᵀ·s·a)`.
pub fn quadratic_trace<T: Scalar>(a: &Matrix<T>, s: &SymMatrix<T>) -> Result<T> {
    if a.rows() != s.order() {
        return Err(DfsError::DimensionMismatch(format!(
            "projection has {} rows, scatter has order {}",
            a.rows(),
            s.order()
        )));
    }
    let sa = s.as_matrix().matmul(a)?;
    Ok(a.as_slice().iter().zip(sa.as_slice()).map(|(&x, &y)| x * y).sum())
}

/// Smoothed objective `−tr(aᵀ·sb·a) + γ·Σᵢ(‖aⁱ‖₂² + ζ)^{p/2}`.
pub fn dfs_objective<T: Scalar>(a: &Matrix<T>, sb: &SymMatrix<T>, gamma: T, p: T, zeta: T) -> Result<T> {
    let fit = quadratic_trace(a, sb)?;
    let half_p = p / T::lit(2.0);
    let penalty: T = (0..a.rows()).map(|i| (dot(a.row(i), a.row(i)) + zeta).powf(half_p)).sum();
    Ok(-fit + gamma * penalty)
}

/// Unsmoothed objective `−tr(aᵀ·sb·a) + γ·‖a‖₂,ₚᵖ`.
pub fn dfs_objective_raw<T: Scalar>(a: &Matrix<T>, sb: &SymMatrix<T>, gamma: T, p: T) -> Result<T> {
    let fit = quadratic_trace(a, sb)?;
    let (_, penalty) = row_norms_2p(a, p);
    Ok(-fit + gamma * penalty)
}

/// `Σᵢ |‖nextⁱ‖₂ − ‖prevⁱ‖₂|`.
pub fn divergence<T: Scalar>(prev: &Matrix<T>, next: &Matrix<T>) -> Result<T> {
    if prev.shape() != next.shape() {
        return Err(DfsError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            prev.rows(),
            prev.cols(),
            next.rows(),
            next.cols()
        )));
    }
    Ok((0..prev.rows()).map(|i| (norm2(next.row(i)) - norm2(prev.row(i))).abs()).sum())
}

/// Checks `‖a‖ᵖ/‖a_k‖ᵖ − (p/2)·‖a‖²/‖a_k‖² ≤ 1 − p/2` (plus `1e-12` slack).
///
/// This is the per-row inequality behind monotone descent of the
/// reweighted iteration; it should never return `false` for valid input.
pub fn lemma1_inequality<T: Scalar>(a: &[T], a_k: &[T], p: T) -> Result<bool> {
    if !(p > T::zero() && p <= T::lit(2.0)) {
        return Err(DfsError::InvalidConfig(format!("p must lie in (0, 2], got {p}")));
    }
    if a.len() != a_k.len() {
        return Err(DfsError::DimensionMismatch(format!("vectors of length {} and {}", a.len(), a_k.len())));
    }
    let na = norm2(a);
    let nk = norm2(a_k);
    if na == T::zero() || nk == T::zero() {
        return Err(DfsError::ZeroVector);
    }
    let t = na / nk;
    let half_p = p / T::lit(2.0);
    let quad = half_p * t * t;
    let lhs = t.powf(p) - quad;
    // rounding in t^p and t² grows with their magnitude
    let slack = T::tol(1e-12, 16.0) * (T::one() + quad);
    Ok(lhs <= T::one() - half_p + slack)
}
