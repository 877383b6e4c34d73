//! Real scalar abstraction shared by every kernel.
//!
//! All matrices hold `Complex<T>` with `T: Real`. The crate is exercised in
//! `f64`; `f32` builds and runs with tolerances widened by [`Real::tol`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable as the real part of matrix entries.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Rescales a tolerance written for `f64` to this type's precision.
    ///
    /// The threshold keeps the same fraction of significant digits: `1e-10`
    /// spends about 10 of the 15.7 digits of `f64`, so in `f32` it becomes
    /// `1e-10^(ln ε_32 / ln ε_64) ≈ 3e-5`.
    #[inline]
    fn tol(x_f64: f64) -> Self {
        let eps = Self::epsilon().to_f64().unwrap_or(f64::EPSILON);
        if eps == f64::EPSILON || !(x_f64 > 0.0 && x_f64 < 1.0) {
            return Self::of(x_f64);
        }
        Self::of(x_f64.powf(eps.ln() / f64::EPSILON.ln()))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}
