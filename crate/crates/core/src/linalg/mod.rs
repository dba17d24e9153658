//! Dense symmetric linear algebra used by the solver.

mod cholesky;
mod eigen;
mod matrix;
mod sym;

pub use cholesky::{cholesky, LowerTriangular};
pub use eigen::{
    generalized_eig_smallest, jacobi_raw, order_pairs, pair_residual, symmetric_eigen, EigPairs, GeneralizedEigen,
    JacobiStats, MAX_SWEEPS,
};
pub use matrix::{dot, norm2, Matrix};
pub use sym::SymMatrix;
