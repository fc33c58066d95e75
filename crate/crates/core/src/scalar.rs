use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign};

/// Floating point type the solver is generic over.
pub trait Scalar:
    Float + FromPrimitive + NumAssign + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Largest `|p|` accepted by the `sinh`/`cosh` nonlinearity before it is
    /// reported as an overflow.
    const SINH_LIMIT: Self;

    /// Converts an `f64` literal. Infallible for the implemented types.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const SINH_LIMIT: Self = 700.0;
}

impl Scalar for f32 {
    const SINH_LIMIT: Self = 88.0;
}
