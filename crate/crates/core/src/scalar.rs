//! Scalar abstraction for the numeric core.
//!
//! Everything in this crate is generic over a real floating-point scalar.
//! The trait below is a thin bundle of the `num_traits` capabilities the
//! algorithms actually use; `f32` and `f64` are the intended models, with
//! `f64` as the default throughout the crate-root aliases.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar over which all matrices and operators are built.
pub trait RealScalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Shorthand conversion from an `f64` constant. Panics only when the
    /// target type cannot represent any `f64` at all, which none of the
    /// intended models do.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("f64 constant not representable in scalar type")
    }
}

impl RealScalar for f32 {}
impl RealScalar for f64 {}

/// Complex number over the generic real scalar.
pub type C<R> = Complex<R>;

/// `e^{i t}` as a complex number.
pub fn cis<R: RealScalar>(t: R) -> C<R> {
    Complex::new(t.cos(), t.sin())
}

/// The imaginary unit.
pub fn im_unit<R: RealScalar>() -> C<R> {
    Complex::new(R::zero(), R::one())
}

/// Real constant lifted into the complex plane.
pub fn re<R: RealScalar>(x: R) -> C<R> {
    Complex::new(x, R::zero())
}
