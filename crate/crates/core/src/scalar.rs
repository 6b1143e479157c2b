//! Scalar abstractions.
//!
//! Numeric code in this crate is written against [`Real`] so that it runs on
//! `f32` and `f64`. Exact work (symbolic reduction, Sturm counting) uses
//! [`Ring`] / [`Field`], which are satisfied by `BigInt`, `BigRational`, the
//! primitive floats and by [`Poly`](crate::poly::Poly) itself.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, One, ToPrimitive, Zero};

/// Commutative ring with unit, by-value arithmetic.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A [`Ring`] with exact (or at least total) division by nonzero elements.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// Floating-point scalar used by the solvers and the finite-volume code.
///
/// The tolerance hooks give each precision a sensible default; everything
/// that takes a tolerance also accepts an explicit one.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Residual a Newton-type corrector can be driven to.
    fn corrector_tol() -> Self;
    /// Acceptance threshold for `‖W(h) − h‖∞`.
    fn residual_tol() -> Self;
    /// Two solutions closer than this in the sup norm are the same solution.
    fn dedup_tol() -> Self;

    /// Literal conversion; panics only if `x` is not representable at all.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal not representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn corrector_tol() -> Self {
        1e-12
    }
    fn residual_tol() -> Self {
        1e-10
    }
    fn dedup_tol() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn corrector_tol() -> Self {
        1e-5
    }
    fn residual_tol() -> Self {
        1e-4
    }
    fn dedup_tol() -> Self {
        1e-3
    }
}
