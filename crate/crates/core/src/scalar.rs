//! Floating point scalar abstraction.
//!
//! Every numeric routine in the crate is written against [`Scalar`] so that the
//! same code runs in `f64` (the default, used by the CLI and all reported
//! tolerances) or `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar type usable by the solver: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    /// Converts a count to the scalar type.
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    /// Widens to `f64` for reporting.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// A tolerance of `base`, floored at `eps_factor` machine epsilons so that
    /// tolerances tuned for `f64` stay attainable in narrower types.
    fn tol(base: f64, eps_factor: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(eps_factor);
        Self::lit(base).max(floor)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
