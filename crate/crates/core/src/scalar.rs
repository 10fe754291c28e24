//! Scalar abstraction: the model formulas are written once over a generic
//! floating-point type and instantiated at `f64` (the default everywhere)
//! or `f32`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the model is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Relative tolerance used to detect the boundary regime `r·q = 1`.
    fn regime_tol() -> Self;

    /// Generic relative tolerance for "these parameters are meant to be
    /// equal" checks (e.g. `s = r` in the discounted fair game).
    fn param_tol() -> Self {
        Self::regime_tol()
    }

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 representable in scalar type")
    }

    fn as_f64(self) -> f64;
}

macro_rules! impl_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            fn regime_tol() -> Self {
                $tol
            }

            fn as_f64(self) -> f64 {
                self as f64
            }
        }
    };
}

impl_scalar!(f64, 1e-12);
impl_scalar!(f32, 1e-5);
