use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use crate::error::{DfsError, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::scatter::LabeledDataset;

use super::{LabelMap, LoadedDataset};

pub fn load_sparse_libsvm_format<T: Scalar>(path: impl AsRef<Path>) -> Result<LoadedDataset<T>> {
    read_sparse_libsvm_format(File::open(path)?)
}

/// Parses `label index:value ...` lines with 1-based, strictly ascending
/// indices. Absent entries are zero; the feature count is the largest index
/// seen. Blank lines and `#` comments are ignored.
pub fn read_sparse_libsvm_format<T: Scalar, R: Read>(reader: R) -> Result<LoadedDataset<T>> {
    let mut labels = LabelMap::default();
    let mut ids = Vec::new();
    let mut rows: Vec<Vec<(usize, f64)>> = Vec::new();
    let mut d = 0;

    for (ln, line) in BufReader::new(reader).lines().enumerate() {
        let line_no = ln + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let label = tokens.next().expect("non-empty line has a token");
        let mut entries = Vec::new();
        let mut previous = 0;
        for (t, token) in tokens.enumerate() {
            let column = t + 2;
            let parse_err = |message: String| DfsError::Parse { line: line_no, column, message };
            let (idx, val) =
                token.split_once(':').ok_or_else(|| parse_err(format!("expected index:value, got {token:?}")))?;
            let idx: usize = idx.parse().map_err(|_| parse_err(format!("bad feature index {idx:?}")))?;
            if idx == 0 {
                return Err(parse_err("feature indices are 1-based".into()));
            }
            if idx <= previous {
                return Err(DfsError::NonAscendingIndex { line: line_no, index: idx, previous });
            }
            let v: f64 = val.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| DfsError::NonNumericValue {
                row: line_no,
                column: idx.to_string(),
                value: val.to_string(),
            })?;
            previous = idx;
            d = d.max(idx);
            entries.push((idx - 1, v));
        }
        ids.push(labels.id(label));
        rows.push(entries);
    }

    let mut features = Matrix::zeros(rows.len(), d);
    for (i, entries) in rows.iter().enumerate() {
        for &(j, v) in entries {
            features[(i, j)] = T::lit(v);
        }
    }
    let dataset = LabeledDataset::with_classes(features, ids, labels.len())?;
    Ok(LoadedDataset { dataset, label_names: labels.into_names(), label_column: None })
}
