use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::classifier::{accuracy, NearestCentroid};
use super::kfold::{kfold_split, Fold};
use crate::error::{DfsError, Result};
use crate::metrics::{redundancy_rate, CorrelationMode, FeatureSubset};
use crate::scalar::Scalar;
use crate::scatter::{standardize, LabeledDataset, StandardizationParams};
use crate::solver::{solve, DfsConfig};

/// Produces a full feature ranking (best first) from a training set.
pub trait FeatureSelector<T>: Sync {
    fn name(&self) -> String;

    fn rank(&self, train: &LabeledDataset<T>) -> Result<Vec<usize>>;

    /// Settings echoed into reports.
    fn config(&self) -> serde_json::Value {
        serde_json::Value::Null
    }
}

/// Ranks features by the row norms of the discriminative projection.
#[derive(Debug, Clone)]
pub struct DfsSelector<T> {
    pub config: DfsConfig<T>,
}

impl<T: Scalar + Serialize> FeatureSelector<T> for DfsSelector<T> {
    fn name(&self) -> String {
        "dfs".into()
    }

    fn rank(&self, train: &LabeledDataset<T>) -> Result<Vec<usize>> {
        Ok(solve(train, &self.config)?.ranking)
    }

    fn config(&self) -> serde_json::Value {
        serde_json::to_value(&self.config).unwrap_or(serde_json::Value::Null)
    }
}

/// A seeded random permutation, independent of the data.
#[derive(Debug, Clone, Copy)]
pub struct RandomSelector {
    pub seed: u64,
}

impl<T: Scalar> FeatureSelector<T> for RandomSelector {
    fn name(&self) -> String {
        "random".into()
    }

    fn rank(&self, train: &LabeledDataset<T>) -> Result<Vec<usize>> {
        let mut idx: Vec<usize> = (0..train.n_features()).collect();
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(self.seed));
        Ok(idx)
    }

    fn config(&self) -> serde_json::Value {
        serde_json::json!({ "seed": self.seed })
    }
}

/// Keeps features in column order.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoSelection;

impl<T: Scalar> FeatureSelector<T> for NoSelection {
    fn name(&self) -> String {
        "none".into()
    }

    fn rank(&self, train: &LabeledDataset<T>) -> Result<Vec<usize>> {
        Ok((0..train.n_features()).collect())
    }
}

/// `10, 15, …, 100`, clipped to `d`; just `[d]` when `d < 10`.
pub fn default_k_grid(d: usize) -> Vec<usize> {
    let grid: Vec<usize> = (10..=100).step_by(5).filter(|&k| k <= d).collect();
    if grid.is_empty() {
        vec![d]
    } else {
        grid
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveOptions {
    pub k_grid: Vec<usize>,
    pub folds: usize,
    pub seed: u64,
    /// Worker threads for fold evaluation; `1` runs inline.
    pub jobs: usize,
    pub correlation: CorrelationMode,
    /// Stratify folds by class (the default).
    pub stratify: bool,
}

impl CurveOptions {
    pub fn new(k_grid: Vec<usize>) -> Self {
        Self { k_grid, folds: 5, seed: 0, jobs: 1, correlation: CorrelationMode::Signed, stratify: true }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KAccuracy {
    pub k: usize,
    pub mean: f64,
    pub per_fold: Vec<f64>,
}

/// Redundancy is evaluated on the whole standardized dataset for each
/// fold's selected columns and averaged over folds.
pub const REDUNDANCY_CONVENTION: &str = "mean over folds of the redundancy rate of each fold's top-k \
features, measured on the full standardized dataset";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub method_name: String,
    pub k_grid: Vec<usize>,
    pub folds: usize,
    pub seed: u64,
    pub accuracy: Vec<KAccuracy>,
    /// `None` where the rate is undefined (k < 2 or a constant column).
    pub redundancy: Vec<Option<f64>>,
    pub correlation: CorrelationMode,
    pub redundancy_convention: String,
    /// Top `max(k_grid)` features picked in each fold.
    pub fold_selections: Vec<Vec<usize>>,
    pub config: serde_json::Value,
}

impl EvalReport {
    pub fn mean_accuracy_at(&self, k: usize) -> Option<f64> {
        self.accuracy.iter().find(|a| a.k == k).map(|a| a.mean)
    }

    pub fn redundancy_at(&self, k: usize) -> Option<f64> {
        self.k_grid.iter().position(|&g| g == k).and_then(|i| self.redundancy[i])
    }
}

struct FoldOutcome {
    accuracies: Vec<f64>,
    selection: Vec<usize>,
}

/// Cross-validated accuracy and redundancy of `selector` for each subset
/// size in the grid.
///
/// Standardization and selection are fit on the training part of each fold
/// only. Selected columns are taken in ascending index order, so `k = d`
/// reproduces the no-selection classifier exactly.
pub fn run_curve<T: Scalar>(
    data: &LabeledDataset<T>,
    selector: &dyn FeatureSelector<T>,
    opts: &CurveOptions,
) -> Result<EvalReport> {
    let d = data.n_features();
    if opts.k_grid.is_empty() {
        return Err(DfsError::InvalidConfig("k grid is empty".into()));
    }
    if let Some(&bad) = opts.k_grid.iter().find(|&&k| k == 0 || k > d) {
        return Err(DfsError::InvalidConfig(format!("k = {bad} outside 1..={d}")));
    }
    let max_k = *opts.k_grid.iter().max().expect("non-empty grid");
    let folds = kfold_split(data.n_samples(), opts.folds, opts.seed, opts.stratify.then(|| data.labels()))?;

    let run_fold = |fold: &Fold| evaluate_fold(data, selector, fold, &opts.k_grid, max_k);
    let outcomes: Vec<FoldOutcome> = if opts.jobs <= 1 {
        folds.iter().map(run_fold).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| DfsError::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| folds.par_iter().map(run_fold).collect::<Result<_>>())?
    };

    let (full, _) = standardize(data)?;
    let mut accuracy = Vec::with_capacity(opts.k_grid.len());
    let mut redundancy = Vec::with_capacity(opts.k_grid.len());
    for (g, &k) in opts.k_grid.iter().enumerate() {
        let per_fold: Vec<f64> = outcomes.iter().map(|o| o.accuracies[g]).collect();
        let mean = per_fold.iter().sum::<f64>() / per_fold.len() as f64;
        accuracy.push(KAccuracy { k, mean, per_fold });
        redundancy.push(mean_redundancy(&full, &outcomes, k, opts.correlation)?);
    }

    Ok(EvalReport {
        method_name: selector.name(),
        k_grid: opts.k_grid.clone(),
        folds: opts.folds,
        seed: opts.seed,
        accuracy,
        redundancy,
        correlation: opts.correlation,
        redundancy_convention: REDUNDANCY_CONVENTION.into(),
        fold_selections: outcomes.into_iter().map(|o| o.selection).collect(),
        config: selector.config(),
    })
}

fn evaluate_fold<T: Scalar>(
    data: &LabeledDataset<T>,
    selector: &dyn FeatureSelector<T>,
    fold: &Fold,
    k_grid: &[usize],
    max_k: usize,
) -> Result<FoldOutcome> {
    let train = data.subset_rows(&fold.train)?;
    let params = StandardizationParams::fit(train.features());
    let train = train.with_features(params.apply(train.features())?)?;
    let test_x = params.apply(&data.features().select_rows(&fold.test))?;
    let test_y: Vec<usize> = fold.test.iter().map(|&i| data.labels()[i]).collect();

    let ranking = selector.rank(&train)?;
    if ranking.len() != data.n_features() {
        return Err(DfsError::DimensionMismatch(format!(
            "selector returned {} of {} features",
            ranking.len(),
            data.n_features()
        )));
    }
    let mut accuracies = Vec::with_capacity(k_grid.len());
    for &k in k_grid {
        let mut cols = ranking[..k].to_vec();
        cols.sort_unstable();
        let model = NearestCentroid::fit(&train.subset_features(&cols)?);
        let predicted = model.predict(&test_x.select_cols(&cols))?;
        accuracies.push(accuracy(&predicted, &test_y));
    }
    Ok(FoldOutcome { accuracies, selection: ranking[..max_k].to_vec() })
}

fn mean_redundancy<T: Scalar>(
    full: &LabeledDataset<T>,
    outcomes: &[FoldOutcome],
    k: usize,
    mode: CorrelationMode,
) -> Result<Option<f64>> {
    if k < 2 {
        return Ok(None);
    }
    let mut total = 0.0;
    for o in outcomes {
        let subset = FeatureSubset::new(o.selection[..k].to_vec(), full.n_features())?;
        match redundancy_rate(full, &subset, mode) {
            Ok(r) => total += r.to_f64_lossy(),
            Err(DfsError::ConstantFeature(j)) => {
                log::warn!("redundancy undefined at k = {k}: feature {j} is constant");
                return Ok(None);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Some(total / outcomes.len() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid() {
        assert_eq!(default_k_grid(30), vec![10, 15, 20, 25, 30]);
        assert_eq!(default_k_grid(500).len(), 19);
        assert_eq!(default_k_grid(7), vec![7]);
    }
}
