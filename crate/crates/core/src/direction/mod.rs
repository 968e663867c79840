//! Search directions from a gradient bundle.
//!
//! Two vectors are available for a bundle with gradient matrix `G`:
//!
//! * the *ideal vector*, whose `i`-th component is the point of the interval
//!   `[min_j G_ij, max_j G_ij]` closest to zero. It costs one pass over `G`.
//! * the *minimum-norm element* of the convex hull of the columns of `G`,
//!   found by solving `min ½|G λ|²` over the unit simplex (see [`min_norm_qp`]).
//!
//! The ideal vector never has a larger norm than the minimum-norm element, and
//! when it is nonzero its normalized negative is a descent direction.

mod mnp;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::sampling::GradientMatrix;
use crate::scalar::{vec, Scalar};

pub use mnp::{min_norm_qp, project_onto_simplex, qp_certificate_holds, DEFAULT_QP_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DirectionError {
    #[error("cannot normalize the zero vector")]
    ZeroVector,
    #[error("bundle has no columns")]
    EmptyBundle,
    #[error("minimum-norm QP did not reach the optimality certificate within {iterations} iterations")]
    MaxIterationsExceeded { iterations: usize },
    #[error("QP tolerance must be positive")]
    InvalidTolerance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionKind {
    Ideal,
    SteepestApprox,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionResult<T> {
    pub g: Vec<T>,
    /// `-g / |g|`; `None` when `g` is the zero vector.
    pub d: Option<Vec<T>>,
    pub kind: DirectionKind,
    /// Hull weights, only for [`DirectionKind::SteepestApprox`].
    pub lambda: Option<Vec<T>>,
}

impl<T: Scalar> DirectionResult<T> {
    pub(crate) fn new(g: Vec<T>, kind: DirectionKind, lambda: Option<Vec<T>>) -> Self {
        let d = normalize(&g).ok();
        Self { g, d, kind, lambda }
    }

    pub fn g_norm(&self) -> T {
        vec::norm(&self.g)
    }
}

/// `-g / |g|`.
pub fn normalize<T: Scalar>(g: &[T]) -> Result<Vec<T>, DirectionError> {
    // scale first so huge or tiny vectors do not overflow the norm
    let amax = g.iter().fold(T::zero(), |a, v| a.max(v.abs()));
    if amax == T::zero() || !amax.is_finite() {
        return Err(DirectionError::ZeroVector);
    }
    let scaled: Vec<T> = g.iter().map(|&v| v / amax).collect();
    let norm = vec::norm(&scaled);
    Ok(scaled.into_iter().map(|v| -v / norm).collect())
}

/// Componentwise closest-to-zero point of the interval hull of the columns.
///
/// `g_i = (sign(m_i) + sign(M_i)) / 2 * min(|m_i|, |M_i|)` with `m_i`, `M_i`
/// the row-wise min and max of `G`. Equal signs give `sign * min(|m_i|, |M_i|)`
/// and mixed signs or a zero endpoint give exactly `0`.
pub fn ideal_vector<T: Scalar>(grads: &GradientMatrix<T>) -> Vec<T> {
    let n = grads.rows();
    let mut lo = vec![T::infinity(); n];
    let mut hi = vec![T::neg_infinity(); n];
    for col in grads.columns() {
        for ((l, h), &v) in lo.iter_mut().zip(hi.iter_mut()).zip(col) {
            if v < *l {
                *l = v;
            }
            if v > *h {
                *h = v;
            }
        }
    }
    lo.into_iter()
        .zip(hi)
        .map(|(m, big_m)| {
            if m > T::zero() {
                m
            } else if big_m < T::zero() {
                big_m
            } else {
                T::zero()
            }
        })
        .collect()
}

/// Ideal vector packaged as a direction.
pub fn ideal_direction<T: Scalar>(grads: &GradientMatrix<T>) -> DirectionResult<T> {
    DirectionResult::new(ideal_vector(grads), DirectionKind::Ideal, None)
}

/// Count and wall time of QP solves within one run.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QpStats {
    pub count: usize,
    pub time: Duration,
}

impl QpStats {
    /// Solves the minimum-norm QP, charging one solve and its elapsed time.
    pub fn solve<T: Scalar>(
        &mut self,
        grads: &GradientMatrix<T>,
        tol: T,
    ) -> Result<DirectionResult<T>, DirectionError> {
        let start = Instant::now();
        let res = min_norm_qp(grads, tol);
        self.time += start.elapsed();
        self.count += 1;
        res
    }
}
