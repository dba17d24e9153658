//! Supervised feature selection by ℓ2,p-regularized linear discriminant
//! analysis.
//!
//! The solver minimizes `−tr(AᵀS_bA) + γ‖A‖₂,ₚᵖ` subject to `Aᵀ(Sₜ + αI)A = I`
//! by iteratively reweighted generalized eigenproblems, and ranks features by
//! the row norms of the learned projection `A`. Around it sit the scatter
//! computations, redundancy metrics, a cross-validation harness with a
//! planted-data generator, and file I/O for the command-line tool.
//!
//! All numerics are generic over [`Scalar`] (`f64` or `f32`); the `*64`
//! aliases below name the double-precision instantiations used by the CLI.

// `!(x > 0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod scalar;
pub mod scatter;
pub mod solver;

pub use error::{DfsError, Result};
pub use linalg::{cholesky, generalized_eig_smallest, EigPairs, LowerTriangular, Matrix, SymMatrix};
pub use metrics::{pearson, redundancy_rate, CorrelationMode, FeatureSubset};
pub use scalar::Scalar;
pub use scatter::{compute_scatter, standardize, LabeledDataset, ScatterTriple, StandardizationParams};
pub use solver::{solve, solve_scatter, DfsConfig, DfsSolution, Termination};

pub type Matrix64 = Matrix<f64>;
pub type SymMatrix64 = SymMatrix<f64>;
pub type Dataset64 = LabeledDataset<f64>;
pub type Scatter64 = ScatterTriple<f64>;
pub type Config64 = DfsConfig<f64>;
pub type Solution64 = DfsSolution<f64>;

pub type Matrix32 = Matrix<f32>;
pub type SymMatrix32 = SymMatrix<f32>;
pub type Dataset32 = LabeledDataset<f32>;
pub type Config32 = DfsConfig<f32>;
pub type Solution32 = DfsSolution<f32>;
