//! Real scalar abstraction.
//!
//! Every numeric routine in the crate is written against [`Real`], so the
//! same conversion code runs in `f32` or `f64`. Thresholds that only make
//! sense relative to machine precision live on the trait as well.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::str::FromStr;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type usable as the real part of every complex quantity.
pub trait Real:
    'static
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + FromStr
    + Send
    + Sync
{
    /// Reciprocal condition number below which a conversion denominator is
    /// treated as singular.
    fn singular_rcond() -> Self;

    /// Reciprocal condition number below which a least-squares system is
    /// treated as rank deficient.
    fn rank_rcond() -> Self;

    /// Largest relative residual a least-squares fit may carry and still be
    /// returned.
    fn max_fit_residual() -> Self;

    /// Tolerance on `|alpha| - 1` for the traveling-wave phase factor.
    fn unit_tolerance() -> Self;

    /// Lossless conversion from an `f64` literal (exact for `f64`, rounded
    /// for `f32`).
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl Real for f64 {
    fn singular_rcond() -> Self {
        1e-13
    }
    fn rank_rcond() -> Self {
        1e-10
    }
    fn max_fit_residual() -> Self {
        1e-6
    }
    fn unit_tolerance() -> Self {
        1e-12
    }
}

impl Real for f32 {
    fn singular_rcond() -> Self {
        1e-6
    }
    fn rank_rcond() -> Self {
        1e-5
    }
    fn max_fit_residual() -> Self {
        1e-3
    }
    fn unit_tolerance() -> Self {
        1e-5
    }
}

/// Complex scalar over a [`Real`] type.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn is_finite<T: Real>(z: &Cx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
