use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar the numerical core is written against.
///
/// Implemented for `f32` and `f64`. Tolerances quoted throughout the crate
/// (for example `1e-8` on eigenvalues) are only attainable in `f64`; `f32`
/// works end to end with correspondingly looser accuracy.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Most negative argument for which `exp` does not underflow to zero.
    #[inline]
    fn exp_floor() -> Self {
        Self::lit(-700.0).max(Self::min_positive_value().ln())
    }
}

impl Real for f32 {}
impl Real for f64 {}
