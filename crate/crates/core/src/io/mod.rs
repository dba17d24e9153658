//! Dataset ingestion and machine-readable outputs.

mod dense;
mod output;
mod sparse;

use std::collections::HashMap;

pub use dense::{dense_csv_string, load_dense_csv, read_dense_csv, write_dense_csv, LabelColumn};
pub use output::{
    curve_csv_string, ranking_json_string, traces_csv_string, write_json, write_text, RankedFeature, RankingFile,
    RunManifest, TOOL_NAME, TOOL_VERSION,
};
pub use sparse::{load_sparse_libsvm_format, read_sparse_libsvm_format};

use crate::scatter::LabeledDataset;

/// A parsed dataset with the original label strings, indexed by class id.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset<T> {
    pub dataset: LabeledDataset<T>,
    pub label_names: Vec<String>,
    pub label_column: Option<String>,
}

/// Assigns class ids to label strings in order of first appearance.
#[derive(Debug, Default)]
struct LabelMap {
    ids: HashMap<String, usize>,
    names: Vec<String>,
}

impl LabelMap {
    fn id(&mut self, label: &str) -> usize {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.names.len();
        self.ids.insert(label.to_string(), id);
        self.names.push(label.to_string());
        id
    }

    fn len(&self) -> usize {
        self.names.len()
    }

    fn into_names(self) -> Vec<String> {
        self.names
    }
}
