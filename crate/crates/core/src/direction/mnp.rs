//! Minimum-norm point of the convex hull of a finite point set.
//!
//! Primary solver is Wolfe's algorithm: an active-set method over "corrals"
//! (affinely independent subsets whose affine minimizer lies in their relative
//! interior). Each corral carries an orthonormal basis of its affine hull
//! directions, updated column by column and downdated with Givens rotations.
//!
//! If the active-set iteration stalls on rounding (a violating point already in
//! the corral, or an affinely dependent candidate), an accelerated projected
//! gradient method polishes the weights until the optimality certificate
//! holds.

use super::{DirectionError, DirectionKind, DirectionResult};
use crate::sampling::GradientMatrix;
use crate::scalar::{vec, Scalar};

/// Default tolerance of the optimality certificate.
pub const DEFAULT_QP_TOL: f64 = 1e-10;

/// Weights at or below this value are dropped from the corral.
const WEIGHT_FLOOR: f64 = 1e-14;

const MAX_MAJOR: usize = 10_000;
const MAX_POLISH: usize = 50_000;

/// A candidate is affinely dependent on the corral when its distance to the
/// affine hull is below this fraction of its distance to the reference point.
const DEPENDENCE_TOL: f64 = 1e-10;

/// Relative termination tolerance of the active-set method, as a fraction of
/// the largest squared column norm (Wolfe's `Z1`).
const RELATIVE_FLOOR: f64 = 1e-12;

/// Slack for the optimality test: `tol (1 + |g|²)` plus a rounding floor
/// proportional to the largest squared column norm.
fn certificate_slack<T: Scalar>(tol: T, g_norm_sq: T, rows: usize, max_col_sq: T) -> T {
    let rel = T::lit(RELATIVE_FLOOR).max(T::epsilon() * T::from_usize_lossy(rows.max(1)));
    tol * (T::one() + g_norm_sq) + rel * max_col_sq
}

/// Checks `<g, G_j - g> >= -tol (1 + |g|²)` for every column, up to the
/// rounding floor used by [`min_norm_qp`].
pub fn qp_certificate_holds<T: Scalar>(grads: &GradientMatrix<T>, g: &[T], tol: T) -> bool {
    let gg = vec::norm_sq(g);
    let max_col_sq = grads
        .columns()
        .map(vec::norm_sq)
        .fold(T::zero(), T::max);
    let slack = certificate_slack(tol, gg, grads.rows(), max_col_sq);
    grads.columns().all(|col| vec::dot(g, col) - gg >= -slack)
}

/// Affinely independent corral `{p_0, ..., p_k}` with a QR factorization
/// `D = Q R` of its difference matrix `D = [p_1 - p_0, ..., p_k - p_0]`.
/// `Q` is kept explicitly and orthonormal (Gram–Schmidt with a second
/// pass), so the affine minimizer is a projection,
/// `x = p_0 - Q Qᵀ p_0`, and stays accurate when the hull weights are badly
/// conditioned.
struct Corral<T> {
    members: Vec<usize>,
    q: Vec<Vec<T>>,
    /// Columns of `R`, each of length `q.len()`.
    r: Vec<Vec<T>>,
}

impl<T: Scalar> Corral<T> {
    fn new(j: usize) -> Self {
        Self {
            members: vec![j],
            q: Vec::new(),
            r: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.members.len()
    }

    /// `v -= Q Qᵀ v` twice, returning the accumulated coefficients.
    fn orthogonalize(&self, v: &mut [T]) -> Vec<T> {
        let mut coef = vec![T::zero(); self.q.len()];
        for _ in 0..2 {
            for (c, qc) in coef.iter_mut().zip(&self.q) {
                let h = vec::dot(qc, v);
                *c += h;
                for (e, &qv) in v.iter_mut().zip(qc) {
                    *e -= h * qv;
                }
            }
        }
        coef
    }

    /// Adds column `j` unless it is numerically in the affine hull.
    fn try_push(&mut self, grads: &GradientMatrix<T>, j: usize) -> bool {
        let p0 = grads.column(self.members[0]);
        let mut v: Vec<T> = grads.column(j).iter().zip(p0).map(|(&a, &b)| a - b).collect();
        let d_norm = vec::norm(&v);
        let mut coef = self.orthogonalize(&mut v);
        let v_norm = vec::norm(&v);
        let tol = T::lit(DEPENDENCE_TOL).max(T::epsilon() * T::lit(100.0));
        if !(d_norm > T::zero()) || !(v_norm > tol * d_norm) {
            return false;
        }
        v.iter_mut().for_each(|e| *e /= v_norm);
        for col in &mut self.r {
            col.push(T::zero());
        }
        coef.push(v_norm);
        self.r.push(coef);
        self.q.push(v);
        self.members.push(j);
        true
    }

    /// Removes member `i`, restoring triangularity with Givens rotations
    /// applied to both `R` and `Q`.
    fn remove(&mut self, i: usize) {
        self.members.remove(i);
        let start = if i == 0 {
            // new reference p_1: columns become d_t - d_0, and d_0 = r_00 q_0
            let r00 = self.r.remove(0)[0];
            for col in &mut self.r {
                col[0] -= r00;
            }
            0
        } else {
            self.r.remove(i - 1);
            i - 1
        };
        // columns from `start` on are upper Hessenberg
        for a in start..self.r.len() {
            let x = self.r[a][a];
            let y = self.r[a][a + 1];
            let h = x.hypot(y);
            if h == T::zero() {
                continue;
            }
            let (c, s) = (x / h, y / h);
            for col in &mut self.r[a..] {
                let (u, w) = (col[a], col[a + 1]);
                col[a] = c * u + s * w;
                col[a + 1] = -s * u + c * w;
            }
            let (lo, hi) = self.q.split_at_mut(a + 1);
            for (u, w) in lo[a].iter_mut().zip(hi[0].iter_mut()) {
                let (uu, ww) = (*u, *w);
                *u = c * uu + s * ww;
                *w = -s * uu + c * ww;
            }
        }
        self.q.pop();
        for col in &mut self.r {
            col.pop();
        }
    }

    /// Affine minimizer `x` of the corral and its affine weights (summing to
    /// one).
    fn affine_minimizer(&self, grads: &GradientMatrix<T>) -> (Vec<T>, Vec<T>) {
        let mut x = grads.column(self.members[0]).to_vec();
        let c = self.orthogonalize(&mut x);
        // R b = -c
        let k = c.len();
        let mut b: Vec<T> = c.iter().map(|&v| -v).collect();
        for i in (0..k).rev() {
            b[i] /= self.r[i][i];
            let bi = b[i];
            for (l, bl) in b.iter_mut().enumerate().take(i) {
                *bl -= self.r[i][l] * bi;
            }
        }
        let mut weights = Vec::with_capacity(k + 1);
        weights.push(T::one() - b.iter().copied().sum::<T>());
        weights.extend(b);
        (x, weights)
    }
}

enum WolfeOutcome<T> {
    Certified(Vec<T>, Vec<T>),
    Stalled(Vec<T>),
}

fn wolfe<T: Scalar>(grads: &GradientMatrix<T>, norms_sq: &[T], max_col_sq: T, tol: T) -> WolfeOutcome<T> {
    let k = grads.cols();
    let rows = grads.rows();
    let floor = T::lit(WEIGHT_FLOOR);

    let start = (0..k)
        .min_by(|&a, &b| norms_sq[a].partial_cmp(&norms_sq[b]).unwrap_or(std::cmp::Ordering::Equal))
        .expect("nonempty");
    let mut corral = Corral::new(start);
    let mut weights = vec![T::one()];
    let mut x = grads.column(start).to_vec();

    let full_lambda = |corral: &Corral<T>, weights: &[T]| {
        let mut lambda = vec![T::zero(); k];
        for (&j, &w) in corral.members.iter().zip(weights) {
            lambda[j] = w.max(T::zero());
        }
        let total: T = lambda.iter().copied().sum();
        lambda.iter_mut().for_each(|l| *l /= total);
        lambda
    };

    for _ in 0..MAX_MAJOR {
        let xx = vec::norm_sq(&x);
        let (j, best) = (0..k)
            .map(|j| (j, vec::dot(&x, grads.column(j))))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty");
        if best - xx >= -certificate_slack(tol, xx, rows, max_col_sq) {
            return WolfeOutcome::Certified(x, full_lambda(&corral, &weights));
        }
        if corral.members.contains(&j) || !corral.try_push(grads, j) {
            return WolfeOutcome::Stalled(full_lambda(&corral, &weights));
        }
        weights.push(T::zero());

        // minor cycles: move toward the affine minimizer until it is interior
        loop {
            let (y, alpha) = corral.affine_minimizer(grads);
            if alpha.iter().all(|&a| a > floor) {
                x = y;
                weights = alpha;
                break;
            }
            let mut theta = T::one();
            let mut blocking = None;
            for (i, (&a, &w)) in alpha.iter().zip(&weights).enumerate() {
                if a <= floor {
                    let ratio = if w - a > T::zero() { w / (w - a) } else { T::zero() };
                    if blocking.is_none() || ratio < theta {
                        theta = ratio;
                        blocking = Some(i);
                    }
                }
            }
            let theta = theta.max(T::zero()).min(T::one());
            for (w, &a) in weights.iter_mut().zip(&alpha) {
                *w = theta * a + (T::one() - theta) * *w;
            }
            if let Some(b) = blocking {
                weights[b] = T::zero();
            }
            let mut i = corral.len();
            while i > 0 {
                i -= 1;
                if weights[i] <= floor {
                    weights.remove(i);
                    corral.remove(i);
                }
            }
            let total: T = weights.iter().copied().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            if corral.len() == 1 {
                weights[0] = T::one();
                x = grads.column(corral.members[0]).to_vec();
                break;
            }
        }
    }
    WolfeOutcome::Stalled(full_lambda(&corral, &weights))
}

/// Euclidean projection onto the unit simplex (sort-based).
pub fn project_onto_simplex<T: Scalar>(v: &[T]) -> Vec<T> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let mut cumsum = T::zero();
    let mut shift = T::zero();
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - T::one()) / T::from_usize_lossy(i + 1);
        if ui - t > T::zero() {
            shift = t;
        }
    }
    v.iter().map(|&vi| (vi - shift).max(T::zero())).collect()
}

/// Accelerated projected gradient on `½|G λ|²` over the simplex.
fn polish<T: Scalar>(
    grads: &GradientMatrix<T>,
    start: Vec<T>,
    norms_sq: &[T],
    tol: T,
) -> Result<Vec<T>, DirectionError> {
    let k = grads.cols();
    // trace(GᵀG) bounds the largest eigenvalue
    let lipschitz = norms_sq.iter().copied().sum::<T>().max(T::min_positive_value());
    let step = T::one() / lipschitz;
    let mut lambda = start;
    let mut y = lambda.clone();
    let mut t = T::one();
    for it in 0..MAX_POLISH {
        let gy = grads.combine(&y);
        let grad: Vec<T> = grads.columns().map(|c| vec::dot(c, &gy)).collect();
        let stepped: Vec<T> = y.iter().zip(&grad).map(|(&yi, &gi)| yi - step * gi).collect();
        let next = project_onto_simplex(&stepped);
        let t_next = (T::one() + (T::one() + T::lit(4.0) * t * t).sqrt()) / T::lit(2.0);
        let momentum = (t - T::one()) / t_next;
        y = next
            .iter()
            .zip(&lambda)
            .map(|(&a, &b)| a + momentum * (a - b))
            .collect();
        lambda = next;
        t = t_next;
        if it % 16 == 0 && qp_certificate_holds(grads, &grads.combine(&lambda), tol) {
            return Ok(lambda);
        }
    }
    if qp_certificate_holds(grads, &grads.combine(&lambda), tol) {
        return Ok(lambda);
    }
    debug_assert_eq!(lambda.len(), k);
    Err(DirectionError::MaxIterationsExceeded {
        iterations: MAX_POLISH,
    })
}

/// Minimum-norm element `g = G λ*` of the convex hull of the columns of `G`.
///
/// `g` is computed as a projection and `G λ` reproduces it up to rounding
/// amplified by the conditioning of the active columns. The returned weights are nonnegative, sum to one, and satisfy
/// `<g, G_j - g> >= -tol (1 + |g|²)` for every column, up to a rounding floor
/// of `max(1e-12, eps n) max_j |G_j|²`.
pub fn min_norm_qp<T: Scalar>(grads: &GradientMatrix<T>, tol: T) -> Result<DirectionResult<T>, DirectionError> {
    if grads.cols() == 0 {
        return Err(DirectionError::EmptyBundle);
    }
    if !(tol > T::zero()) {
        return Err(DirectionError::InvalidTolerance);
    }
    let norms_sq: Vec<T> = grads.columns().map(vec::norm_sq).collect();
    let max_col_sq = norms_sq.iter().copied().fold(T::zero(), T::max);
    let (g, lambda) = match wolfe(grads, &norms_sq, max_col_sq, tol) {
        WolfeOutcome::Certified(g, l) => (g, l),
        WolfeOutcome::Stalled(l) => {
            log::debug!("min-norm QP: active set stalled, polishing with projected gradient");
            let l = polish(grads, l, &norms_sq, tol)?;
            (grads.combine(&l), l)
        }
    };
    Ok(DirectionResult::new(g, DirectionKind::SteepestApprox, Some(lambda)))
}
