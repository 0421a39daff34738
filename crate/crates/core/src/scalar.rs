//! Floating-point abstraction the numerical kernels are generic over.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar for all dense kernels: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + std::fmt::Debug
    + std::fmt::Display
    + std::iter::Sum
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` literal; panics only on NaN round-trips, which the
    /// supported types never produce.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 literal")
    }

    /// Lossy view as `f64`, for reporting and serialization.
    fn as_f64(self) -> f64;
}

impl Real for f32 {
    fn as_f64(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn as_f64(self) -> f64 {
        self
    }
}

/// Complex number over a [`Real`] scalar.
pub type C<R> = Complex<R>;

/// Complex literal from `f64` parts.
pub fn c<R: Real>(re: f64, im: f64) -> C<R> {
    Complex::new(R::of(re), R::of(im))
}

/// Purely real complex value.
pub fn cr<R: Real>(x: R) -> C<R> {
    Complex::new(x, R::zero())
}

/// Purely imaginary complex value.
pub fn ci<R: Real>(x: R) -> C<R> {
    Complex::new(R::zero(), x)
}

/// The imaginary unit.
pub fn i_unit<R: Real>() -> C<R> {
    Complex::new(R::zero(), R::one())
}
