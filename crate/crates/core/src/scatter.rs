//! Labeled datasets, standardization, and the LDA scatter matrices.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{DfsError, Result};
use crate::linalg::{symmetric_eigen, Matrix, SymMatrix};
use crate::scalar::Scalar;

/// Samples in rows, features in columns, with class ids in `0..n_classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset<T> {
    features: Matrix<T>,
    labels: Vec<usize>,
    n_classes: usize,
    feature_names: Option<Vec<String>>,
}

impl<T: Scalar> LabeledDataset<T> {
    /// Validates and builds a dataset. The class count is `max(label) + 1` and
    /// every class in that range must occur.
    pub fn new(features: Matrix<T>, labels: Vec<usize>) -> Result<Self> {
        let n_classes = labels.iter().copied().max().map_or(0, |m| m + 1);
        Self::with_classes(features, labels, n_classes)
    }

    pub fn with_classes(features: Matrix<T>, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        let (n, d) = features.shape();
        if labels.len() != n {
            return Err(DfsError::DimensionMismatch(format!("{} labels for {n} samples", labels.len())));
        }
        if n < 2 {
            return Err(DfsError::InvalidDataset(format!("need at least 2 samples, got {n}")));
        }
        if d < 1 {
            return Err(DfsError::InvalidDataset("need at least 1 feature".into()));
        }
        if n_classes < 2 {
            return Err(DfsError::InvalidDataset(format!("need at least 2 classes, got {n_classes}")));
        }
        let mut counts = vec![0usize; n_classes];
        for &y in &labels {
            if y >= n_classes {
                return Err(DfsError::InvalidDataset(format!("label {y} outside 0..{n_classes}")));
            }
            counts[y] += 1;
        }
        if let Some(k) = counts.iter().position(|&c| c == 0) {
            return Err(DfsError::DegenerateClass(k));
        }
        if let Some((row, col)) = features.first_non_finite() {
            return Err(DfsError::NonFinite { row, col });
        }
        Ok(Self { features, labels, n_classes, feature_names: None })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.n_features() {
            return Err(DfsError::DimensionMismatch(format!(
                "{} names for {} features",
                names.len(),
                self.n_features()
            )));
        }
        self.feature_names = Some(names);
        Ok(self)
    }

    pub fn features(&self) -> &Matrix<T> {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn n_samples(&self) -> usize {
        self.features.rows()
    }

    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes];
        for &y in &self.labels {
            counts[y] += 1;
        }
        counts
    }

    /// Rows `idx` as a new dataset with the same class count.
    pub fn subset_rows(&self, idx: &[usize]) -> Result<Self> {
        let labels = idx.iter().map(|&i| self.labels[i]).collect();
        let mut out = Self::with_classes(self.features.select_rows(idx), labels, self.n_classes)?;
        out.feature_names = self.feature_names.clone();
        Ok(out)
    }

    /// Columns `cols` as a new dataset.
    pub fn subset_features(&self, cols: &[usize]) -> Result<Self> {
        let mut out = Self::with_classes(self.features.select_cols(cols), self.labels.clone(), self.n_classes)?;
        out.feature_names = self.feature_names.as_ref().map(|names| cols.iter().map(|&c| names[c].clone()).collect());
        Ok(out)
    }

    /// Same labels, new feature matrix of identical shape.
    pub fn with_features(&self, features: Matrix<T>) -> Result<Self> {
        if features.shape() != self.features.shape() {
            return Err(DfsError::DimensionMismatch("replacement feature matrix has a different shape".into()));
        }
        let mut out = Self::with_classes(features, self.labels.clone(), self.n_classes)?;
        out.feature_names = self.feature_names.clone();
        Ok(out)
    }

    /// Same features, new labels (used to build leakage sentinels).
    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Self> {
        let mut out = Self::with_classes(self.features.clone(), labels, self.n_classes)?;
        out.feature_names = self.feature_names.clone();
        Ok(out)
    }
}

/// Per-feature centering and scaling learned from one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationParams<T> {
    pub mean: Vec<T>,
    /// Population standard deviation; `1` for constant columns.
    pub scale: Vec<T>,
    /// Columns with standard deviation below `1e-12`: centered, not scaled.
    pub constant_columns: Vec<usize>,
}

const CONSTANT_STD: f64 = 1e-12;

impl<T: Scalar> StandardizationParams<T> {
    pub fn fit(x: &Matrix<T>) -> Self {
        let (n, d) = x.shape();
        let nf = T::from_count(n);
        let mut mean = vec![T::zero(); d];
        for i in 0..n {
            for (m, &v) in mean.iter_mut().zip(x.row(i)) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= nf;
        }
        let mut var = vec![T::zero(); d];
        for i in 0..n {
            for ((s, &v), &m) in var.iter_mut().zip(x.row(i)).zip(&mean) {
                *s += (v - m) * (v - m);
            }
        }
        let mut scale = Vec::with_capacity(d);
        let mut constant_columns = Vec::new();
        for (j, s) in var.into_iter().enumerate() {
            let std = (s / nf).sqrt();
            if std < T::lit(CONSTANT_STD) {
                constant_columns.push(j);
                scale.push(T::one());
            } else {
                scale.push(std);
            }
        }
        Self { mean, scale, constant_columns }
    }

    pub fn apply(&self, x: &Matrix<T>) -> Result<Matrix<T>> {
        if x.cols() != self.mean.len() {
            return Err(DfsError::DimensionMismatch(format!(
                "standardization fit on {} features, applied to {}",
                self.mean.len(),
                x.cols()
            )));
        }
        Ok(Matrix::from_fn(x.rows(), x.cols(), |i, j| (x[(i, j)] - self.mean[j]) / self.scale[j]))
    }

    pub fn has_warnings(&self) -> bool {
        !self.constant_columns.is_empty()
    }
}

/// Zero-mean, unit (population) standard deviation columns.
pub fn standardize<T: Scalar>(data: &LabeledDataset<T>) -> Result<(LabeledDataset<T>, StandardizationParams<T>)> {
    let params = StandardizationParams::fit(data.features());
    if params.has_warnings() {
        log::warn!("constant feature columns left unscaled: {:?}", params.constant_columns);
    }
    let out = data.with_features(params.apply(data.features())?)?;
    Ok((out, params))
}

/// Total, between-class and within-class scatter plus class statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterTriple<T> {
    pub st: SymMatrix<T>,
    pub sb: SymMatrix<T>,
    pub sw: SymMatrix<T>,
    /// `c × d`, row `k` is the mean of class `k`.
    pub class_means: Matrix<T>,
    pub total_mean: Vec<T>,
    pub class_counts: Vec<usize>,
}

const IDENTITY_TOL: f64 = 1e-8;
const PSD_TOL: f64 = 1e-8;
const RANK_TOL: f64 = 1e-8;

impl<T: Scalar> ScatterTriple<T> {
    pub fn order(&self) -> usize {
        self.st.order()
    }

    pub fn n_classes(&self) -> usize {
        self.class_counts.len()
    }

    pub fn n_samples(&self) -> usize {
        self.class_counts.iter().sum()
    }

    /// Max-abs entry of `st − (sb + sw)`.
    pub fn identity_deviation(&self) -> T {
        let sum = self.sb.add(&self.sw).expect("equal orders");
        self.st.as_matrix().max_abs_diff(sum.as_matrix()).expect("equal orders")
    }

    fn identity_bound(&self) -> T {
        T::tol(IDENTITY_TOL, 1e4) * T::one().max(self.st.frobenius())
    }

    fn check_identity(&self) -> Result<()> {
        let deviation = self.identity_deviation();
        let bound = self.identity_bound();
        if deviation > bound {
            return Err(DfsError::ScatterIdentity { deviation: deviation.to_f64_lossy(), bound: bound.to_f64_lossy() });
        }
        Ok(())
    }

    /// Number of eigenvalues of `sb` above `1e-8 · ‖sb‖_F`.
    pub fn between_rank(&self) -> usize {
        let threshold = T::tol(RANK_TOL, 1e4) * self.sb.frobenius();
        symmetric_eigen(&self.sb).values.iter().filter(|&&v| v > threshold).count()
    }

    /// Full invariant check: the scatter identity, positive semi-definiteness
    /// of all three matrices, and `rank(sb) ≤ c − 1`. Costs three dense
    /// eigendecompositions.
    pub fn check_invariants(&self) -> Result<()> {
        self.check_identity()?;
        for (name, m) in [("st", &self.st), ("sb", &self.sb), ("sw", &self.sw)] {
            let smallest = symmetric_eigen(m).values.first().copied().unwrap_or_else(T::zero);
            if smallest < -(T::tol(PSD_TOL, 1e4) * m.frobenius()) {
                return Err(DfsError::InvalidDataset(format!(
                    "{name} has negative eigenvalue {}",
                    smallest.to_f64_lossy()
                )));
            }
        }
        let rank = self.between_rank();
        if rank + 1 > self.n_classes() {
            return Err(DfsError::InvalidDataset(format!(
                "between-class scatter has rank {rank} with {} classes",
                self.n_classes()
            )));
        }
        Ok(())
    }
}

/// Computes `st`, `sb` and `sw`.
///
/// Samples are accumulated in a canonical order (ascending class, then rows
/// compared lexicographically by value, then original index) so that the
/// result is bit-identical under any permutation of the samples.
pub fn compute_scatter<T: Scalar>(data: &LabeledDataset<T>) -> Result<ScatterTriple<T>> {
    let x = data.features();
    let (n, d) = x.shape();
    let c = data.n_classes();
    let labels = data.labels();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| labels[a].cmp(&labels[b]).then_with(|| lex_cmp(x.row(a), x.row(b))).then(a.cmp(&b)));

    let counts = data.class_counts();
    if let Some(k) = counts.iter().position(|&m| m == 0) {
        return Err(DfsError::DegenerateClass(k));
    }

    let mut class_sums = Matrix::<T>::zeros(c, d);
    let mut total = vec![T::zero(); d];
    for &i in &order {
        let row = x.row(i);
        for (s, &v) in class_sums.row_mut(labels[i]).iter_mut().zip(row) {
            *s += v;
        }
        for (s, &v) in total.iter_mut().zip(row) {
            *s += v;
        }
    }
    let total_mean: Vec<T> = total.iter().map(|&s| s / T::from_count(n)).collect();
    let class_means = Matrix::from_fn(c, d, |k, j| class_sums[(k, j)] / T::from_count(counts[k]));

    let mut st = Matrix::zeros(d, d);
    let mut sw = Matrix::zeros(d, d);
    let mut dt = vec![T::zero(); d];
    let mut dw = vec![T::zero(); d];
    for &i in &order {
        let row = x.row(i);
        let mu_k = class_means.row(labels[i]);
        for j in 0..d {
            dt[j] = row[j] - total_mean[j];
            dw[j] = row[j] - mu_k[j];
        }
        accumulate_outer(&mut st, T::one(), &dt);
        accumulate_outer(&mut sw, T::one(), &dw);
    }

    let mut sb = Matrix::zeros(d, d);
    let mut db = vec![T::zero(); d];
    for k in 0..c {
        for j in 0..d {
            db[j] = class_means[(k, j)] - total_mean[j];
        }
        accumulate_outer(&mut sb, T::from_count(counts[k]), &db);
    }

    let triple = ScatterTriple {
        st: SymMatrix::from_lower(&st)?,
        sb: SymMatrix::from_lower(&sb)?,
        sw: SymMatrix::from_lower(&sw)?,
        class_means,
        total_mean,
        class_counts: counts,
    };
    triple.check_identity()?;
    Ok(triple)
}

/// Adds `w · v·vᵀ` to the lower triangle of `m`.
fn accumulate_outer<T: Scalar>(m: &mut Matrix<T>, w: T, v: &[T]) {
    for (i, &vi) in v.iter().enumerate() {
        let wi = w * vi;
        let row = m.row_mut(i);
        for (r, &vj) in row[..=i].iter_mut().zip(v) {
            *r += wi * vj;
        }
    }
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> Ordering {
    for (&x, &y) in a.iter().zip(b) {
        match x.partial_cmp(&y) {
            Some(Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    Ordering::Equal
}
