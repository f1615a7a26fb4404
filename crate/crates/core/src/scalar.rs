use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point scalar used by the quaternionic layer.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Machine epsilon as an `f64`, handy for tolerance scaling.
    fn eps_f64() -> f64 {
        Self::epsilon().to_f64().unwrap_or(f64::EPSILON)
    }
}

impl Real for f32 {}
impl Real for f64 {}
