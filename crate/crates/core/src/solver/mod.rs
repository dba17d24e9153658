//! Iteratively reweighted solver for ℓ2,p-regularized discriminant feature
//! selection.
//!
//! Each iteration solves `min tr(Aᵀ(γD − S_b)A)` subject to
//! `Aᵀ(Sₜ + αI)A = I` exactly, by taking the `l` smallest generalized
//! eigenpairs, then rebuilds the diagonal reweighting `D` from the new row
//! norms. The ζ-smoothed objective is non-increasing along the iterates.

mod ldfs;
mod norms;

use serde::{Deserialize, Serialize};

pub use ldfs::{ldfs_objective, ldfs_objective_scaling_check};
pub use norms::{
    dfs_objective, dfs_objective_raw, divergence, lemma1_inequality, quadratic_trace, row_norms_2p, update_weights,
    WeightDiag,
};

use crate::error::{DfsError, Result};
use crate::linalg::{order_pairs, pair_residual, symmetric_eigen, EigPairs, GeneralizedEigen, Matrix, SymMatrix};
use crate::scalar::Scalar;
use crate::scatter::{compute_scatter, LabeledDataset, ScatterTriple};

pub const DEFAULT_ZETA: f64 = 1e-10;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 100;
/// Default ridge is this fraction of the mean diagonal of `Sₜ`.
pub const DEFAULT_ALPHA_FRACTION: f64 = 1e-6;
const RANK_TIE_TOL: f64 = 1e-12;

/// Solver settings. `l` and `alpha` default from the data when `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfsConfig<T> {
    pub gamma: T,
    pub p: T,
    pub l: Option<usize>,
    pub alpha: Option<T>,
    pub zeta: T,
    pub tol: T,
    pub max_iter: usize,
}

impl<T: Scalar> DfsConfig<T> {
    pub fn new(gamma: T, p: T) -> Self {
        Self {
            gamma,
            p,
            l: None,
            alpha: None,
            zeta: T::lit(DEFAULT_ZETA),
            tol: T::lit(DEFAULT_TOL),
            max_iter: DEFAULT_MAX_ITER,
        }
    }

    pub fn with_l(mut self, l: usize) -> Self {
        self.l = Some(l);
        self
    }

    pub fn with_alpha(mut self, alpha: T) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn with_zeta(mut self, zeta: T) -> Self {
        self.zeta = zeta;
        self
    }

    pub fn with_tol(mut self, tol: T) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    /// Checks the data-independent constraints.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(DfsError::InvalidConfig(msg));
        if !(self.p > T::zero() && self.p <= T::lit(2.0)) {
            return bad(format!("p must lie in (0, 2], got {}", self.p));
        }
        if !(self.gamma > T::zero()) || !self.gamma.is_finite() {
            return bad(format!("gamma must be positive, got {}", self.gamma));
        }
        if !(self.zeta > T::zero()) || !self.zeta.is_finite() {
            return bad(format!("zeta must be positive, got {}", self.zeta));
        }
        if !(self.tol > T::zero()) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if self.max_iter == 0 {
            return bad("max_iter must be at least 1".into());
        }
        if let Some(alpha) = self.alpha {
            if !(alpha >= T::zero()) || !alpha.is_finite() {
                return bad(format!("alpha must be non-negative, got {alpha}"));
            }
        }
        if self.l == Some(0) {
            return bad("l must be at least 1".into());
        }
        Ok(())
    }

    /// Target dimensionality: explicit `l`, else `c − 1` capped at `d`.
    pub fn resolve_l(&self, d: usize, c: usize) -> Result<usize> {
        match self.l {
            Some(l) if l > d => Err(DfsError::InvalidConfig(format!("l = {l} exceeds the feature count {d}"))),
            Some(l) => {
                if l + 1 > c {
                    log::warn!("l = {l} exceeds c - 1 = {}; between-class scatter has rank at most c - 1", c - 1);
                }
                Ok(l)
            }
            None => Ok((c - 1).clamp(1, d)),
        }
    }

    /// Ridge added to `Sₜ`: explicit `alpha`, else `1e-6 · tr(Sₜ)/d`.
    pub fn resolve_alpha(&self, st: &SymMatrix<T>) -> T {
        self.alpha.unwrap_or_else(|| {
            let mean_diag = st.trace() / T::from_count(st.order());
            let alpha = T::lit(DEFAULT_ALPHA_FRACTION) * mean_diag;
            if alpha > T::zero() {
                alpha
            } else {
                T::lit(DEFAULT_ALPHA_FRACTION)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    Converged,
    MaxIter,
}

/// Per-iteration numerical health of the eigen step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationDiagnostics<T> {
    /// Max-abs entry of `Aᵀ(Sₜ + αI)A − I`.
    pub constraint_deviation: T,
    /// Largest `‖(γD − S_b)a − λ(Sₜ + αI)a‖₂` over the returned pairs.
    pub max_residual: T,
    /// `‖γD − S_b‖_F` for the iteration.
    pub lhs_norm: T,
}

/// Result of [`solve`].
#[derive(Debug, Clone, PartialEq)]
pub struct DfsSolution<T> {
    /// `d × l` projection.
    pub a_matrix: Matrix<T>,
    /// `‖aⁱ‖₂` per feature.
    pub row_scores: Vec<T>,
    /// Feature indices by descending score.
    pub ranking: Vec<usize>,
    /// Smoothed objective after each iteration.
    pub objective_trace: Vec<T>,
    /// Unsmoothed `−tr(AᵀS_bA) + γ‖A‖₂,ₚᵖ` after each iteration.
    pub raw_objective_trace: Vec<T>,
    /// `divergence_trace[k]` compares iterate `k + 1` with iterate `k + 2`
    /// (one-based), so it has `iterations − 1` entries.
    pub divergence_trace: Vec<T>,
    pub diagnostics: Vec<IterationDiagnostics<T>>,
    /// Generalized eigenvalues of the last iteration.
    pub eigenvalues: Vec<T>,
    pub iterations: usize,
    pub terminated_by: Termination,
    pub alpha: T,
    pub l: usize,
}

impl<T: Scalar> DfsSolution<T> {
    pub fn top(&self, k: usize) -> &[usize] {
        &self.ranking[..k.min(self.ranking.len())]
    }
}

/// Computes the scatter matrices of `data` and runs [`solve_scatter`].
pub fn solve<T: Scalar>(data: &LabeledDataset<T>, cfg: &DfsConfig<T>) -> Result<DfsSolution<T>> {
    cfg.validate()?;
    let scatter = compute_scatter(data)?;
    solve_scatter(&scatter, cfg)
}

/// Runs the reweighted iteration on precomputed scatter matrices.
pub fn solve_scatter<T: Scalar>(scatter: &ScatterTriple<T>, cfg: &DfsConfig<T>) -> Result<DfsSolution<T>> {
    cfg.validate()?;
    let d = scatter.order();
    if scatter.sb.order() != d || scatter.sw.order() != d {
        return Err(DfsError::DimensionMismatch("scatter matrices have different orders".into()));
    }
    let l = cfg.resolve_l(d, scatter.n_classes().max(2))?;
    let alpha = cfg.resolve_alpha(&scatter.st);
    let constraint = scatter.st.shifted(alpha);
    let eig = GeneralizedEigen::new(&constraint)?;
    let sb = &scatter.sb;

    let mut weights = vec![T::one(); d];
    let mut current: Option<Matrix<T>> = None;
    let mut objective_trace = Vec::new();
    let mut raw_objective_trace = Vec::new();
    let mut divergence_trace = Vec::new();
    let mut diagnostics = Vec::new();
    let mut eigenvalues = Vec::new();
    let mut terminated_by = Termination::MaxIter;
    let div_bound = cfg.tol * T::from_count(d);

    for iter in 1..=cfg.max_iter {
        let lhs = sb.diag_minus(&weights, cfg.gamma)?;
        let mut pairs = eig.smallest(&lhs, l)?;
        if let Some(prev) = current.as_ref() {
            if quadratic_trace(&pairs.vectors, &lhs)? > quadratic_trace(prev, &lhs)? {
                pairs = refine_in_span(&lhs, &constraint, &pairs, prev)?;
            }
        }
        let a = pairs.vectors;
        diagnostics.push(iteration_diagnostics(&lhs, &constraint, &pairs.values, &a)?);

        let objective = dfs_objective(&a, sb, cfg.gamma, cfg.p, cfg.zeta)?;
        raw_objective_trace.push(dfs_objective_raw(&a, sb, cfg.gamma, cfg.p)?);

        let mut converged = false;
        if let (Some(prev_a), Some(&prev_obj)) = (current.as_ref(), objective_trace.last()) {
            let div = divergence(prev_a, &a)?;
            divergence_trace.push(div);
            let obj_change = (objective - prev_obj).abs();
            converged = obj_change <= cfg.tol * T::one().max(prev_obj.abs()) && div <= div_bound;
        }
        objective_trace.push(objective);
        log::debug!("iteration {iter}: objective {objective}");

        weights = update_weights(&a, cfg.p, cfg.zeta).diag;
        current = Some(a);
        eigenvalues = pairs.values;
        if converged {
            terminated_by = Termination::Converged;
            break;
        }
    }

    let a_matrix = current.expect("max_iter >= 1");
    let (row_scores, _) = row_norms_2p(&a_matrix, cfg.p);
    let ranking = rank_by_scores(&row_scores);
    if terminated_by == Termination::MaxIter {
        log::warn!("solver stopped at max_iter = {} before converging", cfg.max_iter);
    }
    Ok(DfsSolution {
        a_matrix,
        row_scores,
        ranking,
        iterations: objective_trace.len(),
        objective_trace,
        raw_objective_trace,
        divergence_trace,
        diagnostics,
        eigenvalues,
        terminated_by,
        alpha,
        l,
    })
}

/// Rayleigh–Ritz over `span[A_new, A_prev]`, evaluated in the original
/// coordinates.
///
/// When the reweighting spans many orders of magnitude the reduced eigenproblem
/// loses absolute accuracy, and its minimizer can land a rounding error above
/// the previous iterate. The previous iterate is feasible in this subspace, so
/// the refined pairs do no worse than it. Only called when that happened; in
/// exact arithmetic it never is.
fn refine_in_span<T: Scalar>(
    lhs: &SymMatrix<T>,
    constraint: &SymMatrix<T>,
    pairs: &EigPairs<T>,
    prev: &Matrix<T>,
) -> Result<EigPairs<T>> {
    let (d, l) = pairs.vectors.shape();
    let q = Matrix::from_fn(d, 2 * l, |i, j| if j < l { pairs.vectors[(i, j)] } else { prev[(i, j - l)] });

    // constraint-orthonormal basis of the span, dropping dependent directions
    let gram = symmetric_eigen(&constraint.congruence(&q)?);
    let top = gram.values.iter().fold(T::zero(), |m, &v| m.max(v));
    let keep: Vec<usize> = (0..2 * l).filter(|&j| gram.values[j] > T::tol(1e-10, 64.0) * top).collect();
    if keep.len() < l {
        return Ok(pairs.clone());
    }
    let scale: Vec<T> = keep.iter().map(|&j| T::one() / gram.values[j].sqrt()).collect();
    let u = Matrix::from_fn(2 * l, keep.len(), |i, k| gram.vectors[(i, keep[k])] * scale[k]);
    let basis = q.matmul(&u)?;

    let projected = symmetric_eigen(&lhs.congruence(&basis)?);
    let refined = order_pairs(projected.values, basis.matmul(&projected.vectors)?);
    let cols: Vec<usize> = (0..l).collect();
    Ok(EigPairs { values: refined.values[..l].to_vec(), vectors: refined.vectors.select_cols(&cols) })
}

fn iteration_diagnostics<T: Scalar>(
    lhs: &SymMatrix<T>,
    constraint: &SymMatrix<T>,
    values: &[T],
    a: &Matrix<T>,
) -> Result<IterationDiagnostics<T>> {
    let gram = constraint.congruence(a)?;
    let constraint_deviation = gram.as_matrix().max_abs_diff(&Matrix::identity(a.cols())).expect("square gram matrix");
    let mut max_residual = T::zero();
    for (j, &value) in values.iter().enumerate() {
        max_residual = max_residual.max(pair_residual(lhs, constraint, value, &a.col(j))?);
    }
    Ok(IterationDiagnostics { constraint_deviation, max_residual, lhs_norm: lhs.frobenius() })
}

/// Indices ordered by descending score; scores within `1e-12` of the first
/// member of their run are ordered by ascending index.
pub fn rank_by_scores<T: Scalar>(scores: &[T]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let tie = T::lit(RANK_TIE_TOL);
    let mut start = 0;
    while start < idx.len() {
        let mut end = start + 1;
        while end < idx.len() && scores[idx[start]] - scores[idx[end]] <= tie {
            end += 1;
        }
        idx[start..end].sort_unstable();
        start = end;
    }
    idx
}
