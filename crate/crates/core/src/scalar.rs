//! Floating-point scalar abstraction shared by every numeric routine.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Relative bound under which a quadratic coefficient counts as zero.
    const LINEAR_TOL: Self;

    /// Converts an `f64` literal, panicking only if the value is unrepresentable.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal fits the scalar type")
    }

    fn half() -> Self {
        Self::lit(0.5)
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }
}

impl Scalar for f32 {
    const LINEAR_TOL: f32 = 1e-5;
}

impl Scalar for f64 {
    const LINEAR_TOL: f64 = 1e-12;
}

/// `|a - b| / max(1, |a|, |b|)`.
pub fn rel_diff<T: Scalar>(a: T, b: T) -> T {
    (a - b).abs() / T::one().max(a.abs()).max(b.abs())
}
