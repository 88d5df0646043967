use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar usable by every routine in the crate: f32 or f64.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from an f64 literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Slack used when clamping arguments of `asin`/`acos`.
    fn clamp_slack() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(8.0))
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Clamp an inverse-trig argument to [-1, 1] when it overshoots by round-off
/// only. Returns `None` for genuinely out-of-range values.
pub(crate) fn clamp_unit<T: Real>(x: T) -> Option<T> {
    let slack = T::clamp_slack();
    if x.is_nan() || x > T::one() + slack || x < -T::one() - slack {
        None
    } else {
        Some(x.max(-T::one()).min(T::one()))
    }
}
