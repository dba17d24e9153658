use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum DfsError {
    #[error("matrix is not positive definite (pivot {pivot} at index {index}); increase the ridge alpha")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric: entry ({row}, {col}) differs from its transpose")]
    NotSymmetric { row: usize, col: usize },

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("class {0} has no samples")]
    DegenerateClass(usize),

    #[error("scatter identity violated: max |St - Sb - Sw| = {deviation:e} exceeds {bound:e}")]
    ScatterIdentity { deviation: f64, bound: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("within-class projection A^T Sw A is singular")]
    SingularWithinScatter,

    #[error("zero vector supplied where a nonzero vector is required")]
    ZeroVector,

    #[error("feature {0} has zero variance")]
    ConstantFeature(usize),

    #[error("zero variance input to correlation")]
    ZeroVariance,

    #[error("invalid feature subset: {0}")]
    InvalidSubset(String),

    #[error("invalid fold count k = {k} for n = {n}")]
    InvalidK { k: usize, n: usize },

    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("label column {0:?} not found")]
    MissingLabelColumn(String),

    #[error("non-numeric value {value:?} at row {row}, column {column:?}")]
    NonNumericValue { row: usize, column: String, value: String },

    #[error("feature indices not ascending at line {line}: {index} after {previous}")]
    NonAscendingIndex { line: usize, index: usize, previous: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for DfsError {
    fn from(e: std::io::Error) -> Self {
        DfsError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for DfsError {
    fn from(e: serde_json::Error) -> Self {
        DfsError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, DfsError>;
