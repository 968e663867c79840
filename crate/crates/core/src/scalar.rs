//! Floating-point scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real scalar the solvers are generic over. Implemented for `f32` and `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into `Self`, rounding when narrowing.
    #[inline]
    fn lit(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal")
    }

    #[inline]
    fn from_usize_lossy(v: usize) -> Self {
        <Self as FromPrimitive>::from_usize(v).expect("usize converts to float")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Small dense-vector helpers over slices.
pub mod vec {
    use super::Scalar;

    #[inline]
    pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
        debug_assert_eq!(a.len(), b.len());
        a.iter().zip(b).map(|(&x, &y)| x * y).sum()
    }

    #[inline]
    pub fn norm_sq<T: Scalar>(a: &[T]) -> T {
        dot(a, a)
    }

    #[inline]
    pub fn norm<T: Scalar>(a: &[T]) -> T {
        norm_sq(a).sqrt()
    }

    pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x - y) * (x - y))
            .sum::<T>()
            .sqrt()
    }

    /// `x + t * d`
    pub fn axpy<T: Scalar>(x: &[T], t: T, d: &[T]) -> Vec<T> {
        x.iter().zip(d).map(|(&xi, &di)| xi + t * di).collect()
    }

    pub fn all_finite<T: Scalar>(a: &[T]) -> bool {
        a.iter().all(|v| v.is_finite())
    }
}
