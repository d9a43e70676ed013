//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::Serialize;

/// Floating point type the estimators are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances inside the solvers are
/// expressed through [`Real::tolerance`] so that they scale with the
/// precision of the type.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Serialize
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal, which always succeeds for the implementors.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }

    /// Pivot and comparison tolerance, a few hundred ulps around 1.
    #[inline]
    fn tolerance() -> Self {
        Self::epsilon() * Self::lit(256.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `a * ln(b)` with the convention `0 * ln(0) = 0`.
#[inline]
pub(crate) fn xlogy<T: Real>(a: T, b: T) -> T {
    if a == T::zero() {
        T::zero()
    } else {
        a * b.ln()
    }
}

/// Orders two reals, treating incomparable values as equal.
#[inline]
pub(crate) fn cmp_real<T: Real>(a: &T, b: &T) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
}
