use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DfsError, Result};

/// Sorted train and test indices of one fold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Shuffled k-fold partition of `0..n`.
///
/// With `labels`, each class is dealt round-robin across folds after
/// shuffling, continuing the deal from where the previous class stopped, so
/// both per-class and total fold sizes differ by at most one.
pub fn kfold_split(n: usize, k: usize, seed: u64, labels: Option<&[usize]>) -> Result<Vec<Fold>> {
    if k < 2 || k > n {
        return Err(DfsError::InvalidK { k, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tests: Vec<Vec<usize>> = vec![Vec::new(); k];
    match labels {
        Some(labels) => {
            if labels.len() != n {
                return Err(DfsError::DimensionMismatch(format!("{} labels for n = {n}", labels.len())));
            }
            let n_classes = labels.iter().copied().max().map_or(0, |m| m + 1);
            let mut slot = 0;
            for class in 0..n_classes {
                let mut members: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
                members.shuffle(&mut rng);
                for i in members {
                    tests[slot % k].push(i);
                    slot += 1;
                }
            }
        }
        None => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            for (slot, i) in idx.into_iter().enumerate() {
                tests[slot % k].push(i);
            }
        }
    }
    Ok(tests
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let mut in_test = vec![false; n];
            for &i in &test {
                in_test[i] = true;
            }
            let train = (0..n).filter(|&i| !in_test[i]).collect();
            Fold { train, test }
        })
        .collect())
}
