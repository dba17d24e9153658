use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{DfsError, Result};
use crate::linalg::Matrix;
use crate::metrics::FeatureSubset;
use crate::scalar::Scalar;
use crate::scatter::LabeledDataset;

/// Gap between adjacent class means of an informative feature, in units of
/// `noise_sigma`.
pub const CLASS_SEPARATION: f64 = 2.0;

/// Recipe for a planted dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub d: usize,
    pub c: usize,
    pub n_informative: usize,
    pub n_redundant: usize,
    pub noise_sigma: f64,
    pub duplicate_rho: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self { n: 200, d: 20, c: 2, n_informative: 2, n_redundant: 0, noise_sigma: 1.0, duplicate_rho: 0.95, seed: 0 }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(DfsError::InvalidSpec(m));
        if self.c < 2 {
            return bad(format!("need at least 2 classes, got {}", self.c));
        }
        if self.n < self.c.max(2) {
            return bad(format!("n = {} cannot cover {} classes", self.n, self.c));
        }
        if self.d == 0 {
            return bad("d must be positive".into());
        }
        if self.n_informative + self.n_redundant > self.d {
            return bad(format!(
                "{} informative + {} redundant features exceed d = {}",
                self.n_informative, self.n_redundant, self.d
            ));
        }
        if self.n_redundant > 0 && self.n_informative == 0 {
            return bad("redundant features need at least one informative source".into());
        }
        if !(self.noise_sigma > 0.0) || !self.noise_sigma.is_finite() {
            return bad(format!("noise_sigma must be positive, got {}", self.noise_sigma));
        }
        if !(self.duplicate_rho > 0.0 && self.duplicate_rho <= 1.0) {
            return bad(format!("duplicate_rho must lie in (0, 1], got {}", self.duplicate_rho));
        }
        Ok(())
    }
}

/// A redundant column and the informative column it copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RedundantFeature {
    pub index: usize,
    pub source: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticData<T> {
    pub dataset: LabeledDataset<T>,
    /// The planted informative columns.
    pub ground_truth: FeatureSubset,
    pub redundant: Vec<RedundantFeature>,
}

impl<T: Scalar> SyntheticData<T> {
    /// Informative and redundant columns together.
    pub fn planted(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.ground_truth.indices().to_vec();
        all.extend(self.redundant.iter().map(|r| r.index));
        all.sort_unstable();
        all
    }
}

/// Generates a planted dataset.
///
/// Informative features have class-conditional means spaced
/// [`CLASS_SEPARATION`]`·σ` apart (class order shuffled per feature) plus
/// `N(0, σ²)` noise. Redundant features are `ρ·source + τ·N(0, 1)` with `τ`
/// chosen from the source column's spread so that the population correlation
/// is `ρ`. Remaining columns are pure `N(0, σ²)` noise. Column positions are
/// shuffled; a fixed seed reproduces the dataset bit-for-bit.
pub fn generate_synthetic<T: Scalar>(spec: &SyntheticSpec) -> Result<SyntheticData<T>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (n, d, c) = (spec.n, spec.d, spec.c);
    let sigma = spec.noise_sigma;

    let mut labels: Vec<usize> = (0..n).map(|i| i % c).collect();
    labels.shuffle(&mut rng);

    let mut layout: Vec<usize> = (0..d).collect();
    layout.shuffle(&mut rng);
    let informative_cols = &layout[..spec.n_informative];
    let redundant_cols = &layout[spec.n_informative..spec.n_informative + spec.n_redundant];

    let centre = (c as f64 - 1.0) / 2.0;
    let class_orders: Vec<Vec<usize>> = (0..spec.n_informative)
        .map(|_| {
            let mut order: Vec<usize> = (0..c).collect();
            order.shuffle(&mut rng);
            order
        })
        .collect();

    let mut gauss = || -> f64 { StandardNormal.sample(&mut rng) };
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); d];

    for (f, &col) in informative_cols.iter().enumerate() {
        let order = &class_orders[f];
        columns[col] =
            labels.iter().map(|&y| CLASS_SEPARATION * sigma * (order[y] as f64 - centre) + sigma * gauss()).collect();
    }

    let mut redundant = Vec::with_capacity(spec.n_redundant);
    for (r, &col) in redundant_cols.iter().enumerate() {
        let source = informative_cols[r % spec.n_informative];
        let src = columns[source].clone();
        let mean = src.iter().sum::<f64>() / n as f64;
        let std = (src.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64).sqrt();
        let rho = spec.duplicate_rho;
        let tau = (1.0 - rho * rho).max(0.0).sqrt() * std;
        columns[col] = src.iter().map(|&v| rho * v + tau * gauss()).collect();
        redundant.push(RedundantFeature { index: col, source });
    }

    for &col in &layout[spec.n_informative + spec.n_redundant..] {
        columns[col] = (0..n).map(|_| sigma * gauss()).collect();
    }

    let features = Matrix::from_fn(n, d, |i, j| T::lit(columns[j][i]));
    let dataset = LabeledDataset::with_classes(features, labels, c)?;
    let ground_truth = FeatureSubset::new(informative_cols.to_vec(), d)?;
    redundant.sort_by_key(|r| r.index);
    Ok(SyntheticData { dataset, ground_truth, redundant })
}
