use crate::problem::Problem;
use crate::sampling::{sample_ball, RngStream};
use crate::scalar::{vec, Scalar};

/// Number of shrinking balls tried before giving up.
pub const PERTURBATION_ATTEMPTS: usize = 64;

/// Result of [`perturb_iterate`].
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation<T> {
    pub x: Vec<T>,
    pub f: T,
    /// Whether the candidate had to be moved.
    pub moved: bool,
    /// Function evaluations spent (zero on the identity path).
    pub evaluations: usize,
}

/// Replaces a nondifferentiable candidate `x_k + t d` by a nearby
/// differentiable point `x̂` with
///
/// * `f(x̂) - f(x_k) < -c t |g|`
/// * `|x_k + t d - x̂| <= min(t, eps)`
///
/// Attempt `j` samples uniformly from the ball of radius `min(t, eps) 2^-j`
/// around the candidate. A differentiable candidate is returned unchanged
/// (with `f_candidate`).
///
/// Returns `None` when all attempts fail.
#[allow(clippy::too_many_arguments)]
pub fn perturb_iterate<T: Scalar>(
    problem: &Problem<T>,
    x_k: &[T],
    f_xk: T,
    t: T,
    d: &[T],
    f_candidate: T,
    eps: T,
    g_norm: T,
    c: T,
    rng: &mut RngStream,
) -> Option<Perturbation<T>> {
    let candidate = vec::axpy(x_k, t, d);
    if !problem.is_nondifferentiable(&candidate) {
        return Some(Perturbation {
            x: candidate,
            f: f_candidate,
            moved: false,
            evaluations: 0,
        });
    }
    let limit = t.min(eps);
    let decrease = c * t * g_norm;
    let mut radius = limit;
    let mut evaluations = 0;
    for _ in 0..PERTURBATION_ATTEMPTS {
        let x_hat = sample_ball(rng, &candidate, radius);
        if !problem.is_nondifferentiable(&x_hat) && vec::dist(&candidate, &x_hat) <= limit {
            let f_hat = problem.objective().value(&x_hat);
            evaluations += 1;
            if f_hat - f_xk < -decrease {
                return Some(Perturbation {
                    x: x_hat,
                    f: f_hat,
                    moved: true,
                    evaluations,
                });
            }
        }
        radius *= T::lit(0.5);
    }
    None
}
