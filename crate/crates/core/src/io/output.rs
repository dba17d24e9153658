use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::harness::EvalReport;
use crate::scalar::Scalar;
use crate::solver::{DfsSolution, Termination};

pub const TOOL_NAME: &str = "dfs";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to regenerate a set of output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub input_path: Option<String>,
    pub input_format: Option<String>,
    pub label_column: Option<String>,
    /// Class id `k` corresponds to `label_mapping[k]`.
    pub label_mapping: Vec<String>,
    pub config: serde_json::Value,
    pub options: serde_json::Value,
    pub seed: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            input_path: None,
            input_format: None,
            label_column: None,
            label_mapping: Vec::new(),
            config: serde_json::Value::Null,
            options: serde_json::Value::Null,
            seed,
            outputs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedFeature {
    pub feature_index: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub score: f64,
}

/// Ranking output: the requested top features and the full ordering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingFile {
    pub top: Vec<usize>,
    pub ranking: Vec<RankedFeature>,
    pub iterations: usize,
    pub terminated_by: Termination,
    pub final_objective: f64,
    pub objective_trace: Vec<f64>,
    pub divergence_trace: Vec<f64>,
}

impl RankingFile {
    pub fn from_solution<T: Scalar>(sol: &DfsSolution<T>, top: usize, names: Option<&[String]>) -> Self {
        let ranking = sol
            .ranking
            .iter()
            .map(|&i| RankedFeature {
                feature_index: i,
                name: names.map(|n| n[i].clone()),
                score: sol.row_scores[i].to_f64_lossy(),
            })
            .collect();
        Self {
            top: sol.top(top).to_vec(),
            ranking,
            iterations: sol.iterations,
            terminated_by: sol.terminated_by,
            final_objective: sol.objective_trace.last().map_or(f64::NAN, |v| v.to_f64_lossy()),
            objective_trace: sol.objective_trace.iter().map(|v| v.to_f64_lossy()).collect(),
            divergence_trace: sol.divergence_trace.iter().map(|v| v.to_f64_lossy()).collect(),
        }
    }
}

pub fn ranking_json_string<T: Scalar>(sol: &DfsSolution<T>, top: usize, names: Option<&[String]>) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&RankingFile::from_solution(sol, top, names))?;
    s.push('\n');
    Ok(s)
}

/// `iteration,objective_smoothed,objective_raw,divergence`, one row per
/// iteration; the first row has no divergence.
pub fn traces_csv_string<T: Scalar>(sol: &DfsSolution<T>) -> String {
    let mut s = String::from("iteration,objective_smoothed,objective_raw,divergence\n");
    for k in 0..sol.iterations {
        let div = if k == 0 { String::new() } else { format!("{}", sol.divergence_trace[k - 1]) };
        let _ = writeln!(s, "{},{},{},{}", k + 1, sol.objective_trace[k], sol.raw_objective_trace[k], div);
    }
    s
}

/// `k,mean_accuracy,redundancy`; undefined redundancy is left empty.
pub fn curve_csv_string(report: &EvalReport) -> String {
    let mut s = String::from("k,mean_accuracy,redundancy\n");
    for (acc, red) in report.accuracy.iter().zip(&report.redundancy) {
        let red = red.map(|r| format!("{r}")).unwrap_or_default();
        let _ = writeln!(s, "{},{},{}", acc.k, acc.mean, red);
    }
    s
}

pub fn write_json<S: Serialize>(path: impl AsRef<Path>, value: &S) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    write_text(path, &s)
}

pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    fs::write(path, text)?;
    Ok(())
}
