use crate::error::{DfsError, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::scatter::LabeledDataset;

/// Assigns each sample to the class with the closest mean (Euclidean).
#[derive(Debug, Clone, PartialEq)]
pub struct NearestCentroid<T> {
    centroids: Matrix<T>,
}

impl<T: Scalar> NearestCentroid<T> {
    pub fn fit(train: &LabeledDataset<T>) -> Self {
        let (n, d) = train.features().shape();
        let c = train.n_classes();
        let mut sums = Matrix::<T>::zeros(c, d);
        let counts = train.class_counts();
        for i in 0..n {
            let y = train.labels()[i];
            for (s, &v) in sums.row_mut(y).iter_mut().zip(train.features().row(i)) {
                *s += v;
            }
        }
        let centroids = Matrix::from_fn(c, d, |k, j| sums[(k, j)] / T::from_count(counts[k]));
        Self { centroids }
    }

    pub fn centroids(&self) -> &Matrix<T> {
        &self.centroids
    }

    /// Ties go to the lower class id.
    pub fn predict(&self, x: &Matrix<T>) -> Result<Vec<usize>> {
        if x.cols() != self.centroids.cols() {
            return Err(DfsError::DimensionMismatch(format!(
                "classifier trained on {} features, got {}",
                self.centroids.cols(),
                x.cols()
            )));
        }
        Ok((0..x.rows())
            .map(|i| {
                let row = x.row(i);
                let mut best = 0;
                let mut best_dist = T::infinity();
                for k in 0..self.centroids.rows() {
                    let dist: T = row.iter().zip(self.centroids.row(k)).map(|(&a, &b)| (a - b) * (a - b)).sum();
                    if dist < best_dist {
                        best = k;
                        best_dist = dist;
                    }
                }
                best
            })
            .collect())
    }
}

pub fn classify_nearest_centroid<T: Scalar>(
    train: &LabeledDataset<T>,
    test_features: &Matrix<T>,
) -> Result<Vec<usize>> {
    NearestCentroid::fit(train).predict(test_features)
}

/// Fraction of matching labels; `0` for empty input.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> f64 {
    if truth.is_empty() {
        return 0.0;
    }
    predicted.iter().zip(truth).filter(|(a, b)| a == b).count() as f64 / truth.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn train() -> LabeledDataset<f64> {
        LabeledDataset::new(
            Matrix::from_rows(&[[0.0, 0.0], [2.0, 0.0], [4.0, 4.0], [6.0, 4.0]]).unwrap(),
            vec![0, 0, 1, 1],
        )
        .unwrap()
    }

    #[test]
    fn centroid_point_and_tie() {
        let x = Matrix::from_rows(&[[5.0, 4.0], [1.0, 0.0], [3.0, 2.0]]).unwrap();
        assert_eq!(classify_nearest_centroid(&train(), &x).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(classify_nearest_centroid(&train(), &Matrix::zeros(1, 3)).is_err());
    }

    #[test]
    fn accuracy_fraction() {
        assert_eq!(accuracy(&[0, 1, 1, 0], &[0, 1, 0, 0]), 0.75);
    }
}
