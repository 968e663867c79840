//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use gradsamp::problem::catalog;
use gradsamp::scalar::vec;
use gradsamp::{sample_ball, GradientMatrix, Problem, RngStream};
use nalgebra::{DMatrix, DVector};

/// Minimum norm over the convex hull of `cols` by enumerating supports.
///
/// For every nonempty subset `{p_0, .., p_s}` the affine least-norm point
/// `p_0 + D b` with `D = [p_i - p_0]` is found by an SVD least-squares solve;
/// subsets with a rank-deficient `D` or a negative barycentric weight are
/// skipped. The hull minimum is the smallest norm among the remaining
/// candidates.
pub fn hull_min_norm(cols: &[Vec<f64>]) -> f64 {
    let k = cols.len();
    let n = cols[0].len();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << k) {
        let idx: Vec<usize> = (0..k).filter(|j| mask & (1 << j) != 0).collect();
        let p0 = DVector::from_column_slice(&cols[idx[0]]);
        if idx.len() == 1 {
            best = best.min(p0.norm());
            continue;
        }
        if idx.len() - 1 > n {
            continue;
        }
        let d = DMatrix::from_fn(n, idx.len() - 1, |r, c| cols[idx[c + 1]][r] - cols[idx[0]][r]);
        let svd = d.clone().svd(true, true);
        let smax = svd.singular_values.max();
        if svd.singular_values.min() <= 1e-10 * smax {
            continue;
        }
        let b = match svd.solve(&(-&p0), 0.0) {
            Ok(v) => v,
            Err(_) => continue,
        };
        let w0 = 1.0 - b.sum();
        if w0 < -1e-12 || b.iter().any(|&w| w < -1e-12) {
            continue;
        }
        best = best.min((&p0 + &d * b).norm());
    }
    best
}

/// Gaussian column with a random offset, so some hulls contain the origin and
/// some do not.
pub fn random_matrix(rng: &mut RngStream, n: usize, k: usize) -> GradientMatrix<f64> {
    let shift: Vec<f64> = (0..n).map(|_| 1.5 * rng.standard_normal()).collect();
    let scale = 10f64.powf(2.0 * rng.uniform() - 1.0);
    let cols: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            shift
                .iter()
                .map(|&s| scale * (s + rng.standard_normal()))
                .collect()
        })
        .collect();
    GradientMatrix::from_columns(&cols)
}

pub fn columns(m: &GradientMatrix<f64>) -> Vec<Vec<f64>> {
    m.columns().map(|c| c.to_vec()).collect()
}

/// Largest componentwise `|analytic - central| / (1 + |analytic|)` at `x`.
///
/// Returns `None` when a kink lies within the difference stencil, detected by
/// disagreement of the forward and backward quotients.
pub fn fd_gradient_error(problem: &Problem, x: &[f64]) -> Option<f64> {
    if problem.is_nondifferentiable(x) {
        return None;
    }
    let g = problem.gradient(x).ok()?;
    let f0 = problem.evaluate(x).ok()?;
    let mut worst: f64 = 0.0;
    let mut xp = x.to_vec();
    for i in 0..x.len() {
        let h = 1e-6 * x[i].abs().max(1.0);
        xp[i] = x[i] + h;
        let fp = problem.evaluate(&xp).ok()?;
        xp[i] = x[i] - h;
        let fm = problem.evaluate(&xp).ok()?;
        xp[i] = x[i];
        let fwd = (fp - f0) / h;
        let bwd = (f0 - fm) / h;
        if (fwd - bwd).abs() > 1e-3 * (1.0 + fwd.abs().max(bwd.abs())) {
            return None;
        }
        let central = (fp - fm) / (2.0 * h);
        worst = worst.max((g[i] - central).abs() / (1.0 + g[i].abs()));
    }
    Some(worst)
}

/// Every catalog problem; scalable ones at their test dimension and at 7.
pub fn instances() -> Vec<Problem> {
    let mut out = Vec::new();
    for entry in catalog() {
        if entry.is_scalable() {
            for n in [entry.default_test_dim(), 7] {
                out.push(entry.instantiate(Some(n.max(2))).unwrap());
            }
        } else {
            out.push(entry.instantiate(None).unwrap());
        }
    }
    out
}

/// Worst gradient error over `points` seeded differentiable points, half near
/// `x0` and half near the origin. Points with a kink inside the stencil are
/// redrawn.
pub fn fd_check(p: &Problem, points: usize) -> f64 {
    let mut rng = RngStream::new(2024);
    let x0 = p.x0().to_vec();
    let radius = vec::norm(&x0).max(1.0);
    let zero = vec![0.0; p.dim()];
    let mut worst: f64 = 0.0;
    let mut accepted = 0;
    let mut draws = 0;
    while accepted < points {
        draws += 1;
        assert!(draws < 100 * points, "{}: too many kink rejections", p.label());
        let x = if accepted % 2 == 0 {
            sample_ball(&mut rng, &x0, radius)
        } else {
            sample_ball(&mut rng, &zero, 1.5)
        };
        if let Some(err) = fd_gradient_error(p, &x) {
            worst = worst.max(err);
            accepted += 1;
        }
    }
    worst
}

/// `|x1| + |x2|` with its kinks on the axes, started at `(2, 3)`.
pub fn abs_sum() -> Problem {
    Problem::from_fns_with_kinks(
        "abs_sum",
        vec![2.0, 3.0],
        Some(0.0),
        |x: &[f64]| x[0].abs() + x[1].abs(),
        |x: &[f64], g: &mut [f64]| {
            g[0] = x[0].signum();
            g[1] = x[1].signum();
        },
        |x: &[f64]| x[0] == 0.0 || x[1] == 0.0,
    )
}

/// `½|x|²` started at `(1, 1)`.
pub fn half_square() -> Problem {
    Problem::from_fns(
        "half_square",
        vec![1.0, 1.0],
        Some(0.0),
        |x: &[f64]| 0.5 * x.iter().map(|v| v * v).sum::<f64>(),
        |x: &[f64], g: &mut [f64]| g.copy_from_slice(x),
    )
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
