//! Real scalar abstraction shared by the dense linear algebra layer.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating-point type the matrix kernels are generic over.
///
/// Tolerances are part of the trait because an `f32` build cannot meet
/// the `f64` thresholds; everything above the linear algebra layer runs
/// on `f64`.
pub trait RealScalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Jacobi sweeps stop once the off-diagonal norm falls below this
    /// fraction of the matrix norm.
    fn jacobi_tol() -> Self;

    /// Absolute tolerance for Hermiticity and unitarity preconditions.
    fn check_tol() -> Self;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }
}

impl RealScalar for f64 {
    fn jacobi_tol() -> Self {
        1e-13
    }

    fn check_tol() -> Self {
        1e-10
    }
}

impl RealScalar for f32 {
    fn jacobi_tol() -> Self {
        1e-6
    }

    fn check_tol() -> Self {
        1e-4
    }
}
