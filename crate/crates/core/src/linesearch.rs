//! Backtracking Armijo line searches along a normalized direction `d = -g/|g|`.
//!
//! Both searches try `t = 1, γ, γ², …` and accept the first trial with
//! `f(x + t d) - f(x) < -c t |g|`. The plain search ([`bals`]) gives up after a
//! fixed number of trials; the limited search ([`lbals`]) stops as soon as the
//! trial step is no longer above `min(1, γ ε / 3)` and reports a null step.
//!
//! `f(x)` is supplied by the caller, so each trial costs exactly one function
//! evaluation.

use crate::scalar::{vec, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct LineSearchOutcome<T> {
    /// Accepted step, or zero when no step was accepted.
    pub t: T,
    /// Number of step reductions before acceptance (or the trial count when
    /// nothing was accepted).
    pub backtracks: usize,
    /// Function evaluations charged by the search.
    pub evaluations: usize,
    /// `f(x + t d)` for an accepted step.
    pub f_new: Option<T>,
    /// `x + t d` for an accepted step.
    pub x_new: Option<Vec<T>>,
    /// The plain search hit its trial cap.
    pub exhausted: bool,
    /// The limited search returned `t = 0`.
    pub null_step: bool,
}

impl<T: Scalar> LineSearchOutcome<T> {
    pub fn accepted(&self) -> bool {
        self.t > T::zero()
    }
}

/// `f_new - f_x < -c t |g|`
#[inline]
pub fn sufficient_decrease<T: Scalar>(f_new: T, f_x: T, t: T, c: T, g_norm: T) -> bool {
    f_new - f_x < -c * t * g_norm
}

/// Step threshold of the limited search, `min(1, γ ε / 3)`.
pub fn lbals_threshold<T: Scalar>(eps: T, gamma: T) -> T {
    T::one().min(gamma * eps / T::lit(3.0))
}

fn check_params<T: Scalar>(gamma: T, c: T, g: &[T], d: &[T]) -> T {
    assert!(gamma > T::zero() && gamma < T::one(), "gamma must lie in (0, 1)");
    assert!(c > T::zero() && c < T::one(), "c must lie in (0, 1)");
    assert_eq!(g.len(), d.len());
    let g_norm = vec::norm(g);
    assert!(g_norm > T::zero(), "line search needs a nonzero g");
    g_norm
}

/// Backtracking Armijo line search with at most `max_trials` function
/// evaluations.
///
/// # Panics
///
/// If `gamma` or `c` is outside `(0, 1)` or `g` is zero.
pub fn bals<T, F>(
    mut f: F,
    x: &[T],
    f_x: T,
    g: &[T],
    d: &[T],
    gamma: T,
    c: T,
    max_trials: usize,
) -> LineSearchOutcome<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    let g_norm = check_params(gamma, c, g, d);
    let mut t = T::one();
    for k in 0..max_trials {
        let trial = vec::axpy(x, t, d);
        let f_trial = f(&trial);
        if sufficient_decrease(f_trial, f_x, t, c, g_norm) {
            return LineSearchOutcome {
                t,
                backtracks: k,
                evaluations: k + 1,
                f_new: Some(f_trial),
                x_new: Some(trial),
                exhausted: false,
                null_step: false,
            };
        }
        t *= gamma;
    }
    LineSearchOutcome {
        t: T::zero(),
        backtracks: max_trials,
        evaluations: max_trials,
        f_new: None,
        x_new: None,
        exhausted: true,
        null_step: false,
    }
}

/// Limited backtracking Armijo line search.
///
/// The loop guard is strict: a trial is made only while `t > min(1, γ ε / 3)`.
/// With `γ ε / 3 >= 1` no trial is made at all and a null step is returned.
///
/// # Panics
///
/// As [`bals`], and if `eps` is not positive.
pub fn lbals<T, F>(mut f: F, x: &[T], f_x: T, g: &[T], d: &[T], eps: T, gamma: T, c: T) -> LineSearchOutcome<T>
where
    T: Scalar,
    F: FnMut(&[T]) -> T,
{
    let g_norm = check_params(gamma, c, g, d);
    assert!(eps > T::zero(), "eps must be positive");
    let threshold = lbals_threshold(eps, gamma);
    let mut t = T::one();
    let mut trials = 0;
    while t > threshold {
        let trial = vec::axpy(x, t, d);
        let f_trial = f(&trial);
        trials += 1;
        if sufficient_decrease(f_trial, f_x, t, c, g_norm) {
            return LineSearchOutcome {
                t,
                backtracks: trials - 1,
                evaluations: trials,
                f_new: Some(f_trial),
                x_new: Some(trial),
                exhausted: false,
                null_step: false,
            };
        }
        t *= gamma;
    }
    LineSearchOutcome {
        t: T::zero(),
        backtracks: trials,
        evaluations: trials,
        f_new: None,
        x_new: None,
        exhausted: false,
        null_step: true,
    }
}
