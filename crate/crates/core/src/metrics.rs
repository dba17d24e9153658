//! Selection-quality metrics.

use serde::{Deserialize, Serialize};

use crate::error::{DfsError, Result};
use crate::scalar::Scalar;
use crate::scatter::LabeledDataset;

/// A set of distinct feature indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FeatureSubset {
    indices: Vec<usize>,
}

impl FeatureSubset {
    /// Builds a subset of features `0..d`; input order is irrelevant.
    pub fn new(mut indices: Vec<usize>, d: usize) -> Result<Self> {
        indices.sort_unstable();
        if let Some(w) = indices.windows(2).find(|w| w[0] == w[1]) {
            return Err(DfsError::InvalidSubset(format!("feature {} listed twice", w[0])));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= d) {
            return Err(DfsError::InvalidSubset(format!("feature {bad} outside 0..{d}")));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// Fraction of `selected` that falls in this subset.
    pub fn precision_of(&self, selected: &[usize]) -> f64 {
        if selected.is_empty() {
            return 0.0;
        }
        selected.iter().filter(|&&i| self.contains(i)).count() as f64 / selected.len() as f64
    }
}

/// Whether pairwise correlations enter the redundancy rate signed or as
/// absolute values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CorrelationMode {
    #[default]
    Signed,
    Absolute,
}

/// Pearson correlation coefficient.
pub fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Result<T> {
    if x.len() != y.len() {
        return Err(DfsError::DimensionMismatch(format!("vectors of length {} and {}", x.len(), y.len())));
    }
    if x.is_empty() {
        return Err(DfsError::ZeroVariance);
    }
    let n = T::from_count(x.len());
    let mx = x.iter().copied().sum::<T>() / n;
    let my = y.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == T::zero() || syy == T::zero() {
        return Err(DfsError::ZeroVariance);
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    Ok(r.max(-T::one()).min(T::one()))
}

/// Mean pairwise correlation of the selected columns,
/// `(1 / (|F|(|F| − 1))) · Σ_{i>j} corr(fᵢ, fⱼ)`.
///
/// The normalization counts ordered pairs while the sum runs over unordered
/// ones, so a fully duplicated pair scores 0.5.
pub fn redundancy_rate<T: Scalar>(
    data: &LabeledDataset<T>,
    subset: &FeatureSubset,
    mode: CorrelationMode,
) -> Result<T> {
    let m = subset.len();
    if m < 2 {
        return Err(DfsError::InvalidSubset(format!("redundancy needs at least 2 features, got {m}")));
    }
    let d = data.n_features();
    if let Some(&bad) = subset.indices().iter().find(|&&i| i >= d) {
        return Err(DfsError::InvalidSubset(format!("feature {bad} outside 0..{d}")));
    }
    let cols: Vec<Vec<T>> = subset.indices().iter().map(|&j| data.features().col(j)).collect();
    for (col, &j) in cols.iter().zip(subset.indices()) {
        let first = col[0];
        if col.iter().all(|&v| v == first) {
            return Err(DfsError::ConstantFeature(j));
        }
    }
    let mut total = T::zero();
    for i in 0..m {
        for j in 0..i {
            let r = pearson(&cols[i], &cols[j]).map_err(|_| DfsError::ConstantFeature(subset.indices()[i]))?;
            total += match mode {
                CorrelationMode::Signed => r,
                CorrelationMode::Absolute => r.abs(),
            };
        }
    }
    Ok(total / T::from_count(m * (m - 1)))
}
