//! Objective of ℓ∞,1-regularized LDA feature selection, used only to show
//! that the ratio form admits a shrinking-to-zero trivial minimizer.

use crate::error::{DfsError, Result};
use crate::linalg::{cholesky, Matrix, SymMatrix};
use crate::scalar::Scalar;

/// `−tr((aᵀ·sw·a)⁻¹·(aᵀ·sb·a)) + γ·Σᵢ maxⱼ |aᵢⱼ|`.
pub fn ldfs_objective<T: Scalar>(a: &Matrix<T>, sb: &SymMatrix<T>, sw: &SymMatrix<T>, gamma: T) -> Result<T> {
    if sb.order() != a.rows() || sw.order() != a.rows() {
        return Err(DfsError::DimensionMismatch(format!(
            "projection has {} rows, scatters have orders {} and {}",
            a.rows(),
            sb.order(),
            sw.order()
        )));
    }
    let within = sw.congruence(a)?;
    let between = sb.congruence(a)?;
    let factor = cholesky(&within).map_err(|_| DfsError::SingularWithinScatter)?;
    let half = factor.solve_lower(between.as_matrix())?;
    let ratio = factor.solve_upper_transposed(&half)?.trace();
    let penalty: T = (0..a.rows()).map(|i| a.row(i).iter().fold(T::zero(), |m, &x| m.max(x.abs()))).sum();
    Ok(-ratio + gamma * penalty)
}

/// Evaluates the objective at `a` and at `c_scale · a`.
///
/// The ratio term is invariant to scaling, so with `0 < |c| < 1` the second
/// value never exceeds the first.
pub fn ldfs_objective_scaling_check<T: Scalar>(
    a: &Matrix<T>,
    sb: &SymMatrix<T>,
    sw: &SymMatrix<T>,
    gamma: T,
    c_scale: T,
) -> Result<(T, T)> {
    if !(c_scale.abs() > T::zero() && c_scale.abs() < T::one()) {
        return Err(DfsError::InvalidConfig(format!("scale must satisfy 0 < |c| < 1, got {c_scale}")));
    }
    if a.max_abs() == T::zero() {
        return Err(DfsError::ZeroVector);
    }
    let j_a = ldfs_objective(a, sb, sw, gamma)?;
    let j_ca = ldfs_objective(&a.scaled(c_scale), sb, sw, gamma)?;
    Ok((j_a, j_ca))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> (Matrix<f64>, SymMatrix<f64>, SymMatrix<f64>) {
        let sb = SymMatrix::from_lower_fn(3, |i, j| [[4.0, 0.0, 0.0], [1.0, 2.0, 0.0], [0.5, 0.0, 1.0]][i][j]).unwrap();
        let sw = SymMatrix::from_lower_fn(3, |i, j| if i == j { 2.0 + i as f64 } else { 0.3 }).unwrap();
        let a = Matrix::from_rows(&[[1.0, 0.2], [-0.5, 1.0], [0.3, -0.7]]).unwrap();
        (a, sb, sw)
    }

    #[test]
    fn half_scale_strictly_better() {
        let (a, sb, sw) = fixture();
        let (ja, jca) = ldfs_objective_scaling_check(&a, &sb, &sw, 0.5, 0.5).unwrap();
        assert!(jca < ja);
    }

    #[test]
    fn no_penalty_is_scale_invariant() {
        let (a, sb, sw) = fixture();
        let (ja, jca) = ldfs_objective_scaling_check(&a, &sb, &sw, 0.0, 0.5).unwrap();
        assert!((ja - jca).abs() < 1e-12);
    }

    #[test]
    fn singular_within() {
        let (a, sb, _) = fixture();
        let sw = SymMatrix::zeros(3);
        assert_eq!(ldfs_objective(&a, &sb, &sw, 1.0), Err(DfsError::SingularWithinScatter));
    }

    #[test]
    fn invalid_scale_and_zero() {
        let (a, sb, sw) = fixture();
        assert!(ldfs_objective_scaling_check(&a, &sb, &sw, 1.0, 1.0).is_err());
        assert!(ldfs_objective_scaling_check(&a, &sb, &sw, 1.0, 0.0).is_err());
        let z = Matrix::zeros(3, 2);
        assert_eq!(ldfs_objective_scaling_check(&z, &sb, &sw, 1.0, 0.5), Err(DfsError::ZeroVector));
    }
}
