//! Scalar traits the numeric code is generic over.
//!
//! Message passing runs over any [`LlrScalar`] (`f32`, `f64`); pseudo-codeword
//! arithmetic runs over any [`WeightScalar`], which covers `f64` as well as
//! exact rationals.

use std::fmt::Debug;

use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating-point type usable for log-likelihood ratios.
pub trait LlrScalar: Float + FromPrimitive + ToPrimitive + Debug + Send + Sync + 'static {
    /// Saturation bound for messages.
    fn clip() -> Self {
        Self::from_f64(31.0).unwrap()
    }
}

impl LlrScalar for f32 {}
impl LlrScalar for f64 {}

/// Ordered field type usable for pseudo-codeword entries and pseudo-weights.
pub trait WeightScalar: Num + Clone + PartialOrd + FromPrimitive + ToPrimitive + Debug {
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar")
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }
}

impl WeightScalar for f32 {}
impl WeightScalar for f64 {}
impl WeightScalar for Ratio<i64> {}
impl WeightScalar for Ratio<i128> {}
