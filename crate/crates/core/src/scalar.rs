//! Scalar abstraction shared by the linear-algebra and divergence layers.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Complex number over a real scalar.
pub type Complex<T> = num_complex::Complex<T>;

/// Real floating-point scalar: `f32` or `f64`.
///
/// Every numerical tolerance in this crate is written as an `f64` literal and
/// converted through [`Real::lit`]. The tolerances are calibrated for `f64`;
/// `f32` instantiations work but checks near `1e-10` are meaningless there.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[inline]
pub(crate) fn cre<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
