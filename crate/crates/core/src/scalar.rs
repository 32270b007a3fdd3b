//! Scalar abstraction shared by the generic kernels.

use nalgebra::RealField;
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display, LowerExp};

/// Real floating-point type the linear-algebra layer is generic over (`f32` or `f64`).
///
/// Complex entries are `Complex<T>`; nalgebra provides `ComplexField` for them.
pub trait Real:
    RealField + Copy + FromPrimitive + ToPrimitive + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// Converts an `f64` literal. Every supported type can represent (a rounding of) any `f64`.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// `x` as `f64`.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("finite real")
    }

    /// A tolerance that is `base` for `f64` but never tighter than a small multiple of
    /// the type's machine epsilon.
    fn tol(base: f64) -> Self {
        let floor = Self::default_epsilon() * Self::lit(64.0);
        let base = Self::lit(base);
        if base > floor {
            base
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand constructors for complex scalars.
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn creal<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}
