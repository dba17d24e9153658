//! Cross-validated evaluation of feature rankings on real or planted data.

mod classifier;
mod curve;
mod kfold;
mod synthetic;

pub use classifier::{accuracy, classify_nearest_centroid, NearestCentroid};
pub use curve::{
    default_k_grid, run_curve, CurveOptions, DfsSelector, EvalReport, FeatureSelector, KAccuracy, NoSelection,
    RandomSelector, REDUNDANCY_CONVENTION,
};
pub use kfold::{kfold_split, Fold};
pub use synthetic::{generate_synthetic, RedundantFeature, SyntheticData, SyntheticSpec, CLASS_SEPARATION};
