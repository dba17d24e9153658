use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{DfsError, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::scatter::LabeledDataset;

use super::{LabelMap, LoadedDataset};

/// Which CSV column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl LabelColumn {
    /// Header name when present, otherwise a zero-based index.
    fn resolve(&self, headers: &[String]) -> Result<usize> {
        match self {
            LabelColumn::Name(name) => {
                if let Some(i) = headers.iter().position(|h| h == name) {
                    return Ok(i);
                }
                match name.parse::<usize>() {
                    Ok(i) if i < headers.len() => Ok(i),
                    _ => Err(DfsError::MissingLabelColumn(name.clone())),
                }
            }
            LabelColumn::Index(i) if *i < headers.len() => Ok(*i),
            LabelColumn::Index(i) => Err(DfsError::MissingLabelColumn(i.to_string())),
        }
    }
}

impl From<&str> for LabelColumn {
    fn from(s: &str) -> Self {
        LabelColumn::Name(s.to_string())
    }
}

pub fn load_dense_csv<T: Scalar>(path: impl AsRef<Path>, label: &LabelColumn) -> Result<LoadedDataset<T>> {
    read_dense_csv(File::open(path)?, label)
}

/// Parses comma-separated values with a header row. Blank lines are skipped.
/// Non-label columns become features in header order; labels are numbered
/// by first appearance.
pub fn read_dense_csv<T: Scalar, R: Read>(reader: R, label: &LabelColumn) -> Result<LoadedDataset<T>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(reader);
    let headers: Vec<String> = rdr.headers().map_err(|e| csv_error(e, 1))?.iter().map(str::to_string).collect();
    let label_col = label.resolve(&headers)?;
    let feature_cols: Vec<usize> = (0..headers.len()).filter(|&j| j != label_col).collect();

    let mut labels = LabelMap::default();
    let mut ids = Vec::new();
    let mut values = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(e, 0))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != headers.len() {
            return Err(DfsError::Parse {
                line,
                column: record.len().min(headers.len()) + 1,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        ids.push(labels.id(&record[label_col]));
        for &j in &feature_cols {
            let raw = &record[j];
            let v: f64 = raw.parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| DfsError::NonNumericValue {
                row: line,
                column: headers[j].clone(),
                value: raw.to_string(),
            })?;
            values.push(T::lit(v));
        }
    }

    let n = ids.len();
    let features = Matrix::from_vec(n, feature_cols.len(), values)?;
    let names = feature_cols.iter().map(|&j| headers[j].clone()).collect();
    let dataset = LabeledDataset::with_classes(features, ids, labels.len())?.with_feature_names(names)?;
    Ok(LoadedDataset { dataset, label_names: labels.into_names(), label_column: Some(headers[label_col].clone()) })
}

fn csv_error(e: csv::Error, fallback_line: usize) -> DfsError {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    DfsError::Parse { line, column: 0, message: e.to_string() }
}

/// Writes features plus a trailing label column. Values use the shortest
/// representation that parses back to the same float.
pub fn write_dense_csv<T: Scalar>(
    path: impl AsRef<Path>,
    data: &LabeledDataset<T>,
    label_names: &[String],
    label_header: &str,
) -> Result<()> {
    let mut out = File::create(path)?;
    out.write_all(dense_csv_string(data, label_names, label_header)?.as_bytes())?;
    Ok(())
}

pub fn dense_csv_string<T: Scalar>(
    data: &LabeledDataset<T>,
    label_names: &[String],
    label_header: &str,
) -> Result<String> {
    if label_names.len() < data.n_classes() {
        return Err(DfsError::DimensionMismatch(format!(
            "{} label names for {} classes",
            label_names.len(),
            data.n_classes()
        )));
    }
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let d = data.n_features();
    let mut header: Vec<String> = match data.feature_names() {
        Some(names) => names.to_vec(),
        None => (0..d).map(|j| format!("f{j}")).collect(),
    };
    header.push(label_header.to_string());
    wtr.write_record(&header).map_err(|e| DfsError::Io(e.to_string()))?;
    for i in 0..data.n_samples() {
        let mut row: Vec<String> = data.features().row(i).iter().map(|v| format!("{v}")).collect();
        row.push(label_names[data.labels()[i]].clone());
        wtr.write_record(&row).map_err(|e| DfsError::Io(e.to_string()))?;
    }
    let bytes = wtr.into_inner().map_err(|e| DfsError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| DfsError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, label: &str) -> Result<LoadedDataset<f64>> {
        read_dense_csv(text.as_bytes(), &LabelColumn::from(label))
    }

    #[test]
    fn three_rows() {
        let loaded = read("x,y,class\n1.0,2.0,a\n3.0,4.0,a\n5.0,6.0,b\n", "class").unwrap();
        assert_eq!(loaded.dataset.n_samples(), 3);
        assert_eq!(loaded.dataset.n_features(), 2);
        assert_eq!(loaded.dataset.n_classes(), 2);
        assert_eq!(loaded.dataset.labels(), &[0, 0, 1]);
        assert_eq!(loaded.label_names, vec!["a", "b"]);
        assert_eq!(loaded.dataset.feature_names().unwrap(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn label_by_index_and_blank_trailing_line() {
        let loaded = read("class,x\nb,1\na,2\nb,3\n\n", "0").unwrap();
        assert_eq!(loaded.dataset.n_samples(), 3);
        assert_eq!(loaded.dataset.labels(), &[0, 1, 0]);
        assert_eq!(loaded.dataset.features().col(0), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn nan_is_rejected() {
        let err = read("x,y,class\n1.0,2.0,a\n3.0,NaN,b\n", "class").unwrap_err();
        assert_eq!(err, DfsError::NonNumericValue { row: 3, column: "y".into(), value: "NaN".into() });
    }

    #[test]
    fn missing_label() {
        assert_eq!(read("x,y\n1,2\n3,4\n", "class").unwrap_err(), DfsError::MissingLabelColumn("class".into()));
    }

    #[test]
    fn ragged_row() {
        assert!(matches!(read("x,y,class\n1,2,a\n3,b\n", "class"), Err(DfsError::Parse { .. })));
    }

    #[test]
    fn round_trip() {
        let text = "x,y,class\n0.1,-2.5e-7,a\n3.0000000000000004,4,b\n1e300,0,a\n";
        let loaded = read(text, "class").unwrap();
        let written = dense_csv_string(&loaded.dataset, &loaded.label_names, "class").unwrap();
        let again = read(&written, "class").unwrap();
        assert_eq!(again.dataset, loaded.dataset);
        assert_eq!(again.label_names, loaded.label_names);
    }
}
