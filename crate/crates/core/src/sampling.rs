//! Uniform sampling from Euclidean balls and gradient-bundle assembly.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::problem::{Problem, ProblemError};
use crate::scalar::{vec, Scalar};

/// Seeded random stream. Backed by ChaCha8, which produces the same sequence
/// on every platform for a given seed and stream id.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// An independent stream derived from the same seed.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }
}

/// Draws a point uniformly from the closed unit ball in `R^n`.
///
/// Direction is a normalized standard Gaussian vector and the radius is
/// `U^(1/n)`, which gives the radial CDF `r^n` of the uniform ball measure.
pub fn sample_unit_ball<T: Scalar>(rng: &mut RngStream, n: usize) -> Vec<T> {
    assert!(n >= 1, "ball dimension must be positive");
    let z = loop {
        let z: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let norm = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            break z.into_iter().map(|v| v / norm).collect::<Vec<f64>>();
        }
    };
    let r = rng.uniform().powf(1.0 / n as f64);
    z.into_iter().map(|v| T::lit(v * r)).collect()
}

/// Draws a point uniformly from the ball of the given center and radius.
pub fn sample_ball<T: Scalar>(rng: &mut RngStream, center: &[T], radius: T) -> Vec<T> {
    let u = sample_unit_ball::<T>(rng, center.len());
    vec::axpy(center, radius, &u)
}

/// Column-major `n x k` matrix whose columns are gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientMatrix<T> {
    rows: usize,
    data: Vec<T>,
}

impl<T: Scalar> GradientMatrix<T> {
    pub fn new(rows: usize) -> Self {
        Self {
            rows,
            data: Vec::new(),
        }
    }

    /// Builds a matrix from equally sized columns.
    pub fn from_columns<C: AsRef<[T]>>(columns: &[C]) -> Self {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let mut m = Self::new(rows);
        for col in columns {
            m.push_column(col.as_ref());
        }
        m
    }

    pub fn push_column(&mut self, col: &[T]) {
        assert_eq!(col.len(), self.rows, "column length must equal the row count");
        self.data.extend_from_slice(col);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.data.len().checked_div(self.rows).unwrap_or(0)
    }

    pub fn column(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks_exact(self.rows.max(1))
    }

    /// `G * lambda`
    pub fn combine(&self, lambda: &[T]) -> Vec<T> {
        assert_eq!(lambda.len(), self.cols());
        let mut out = vec![T::zero(); self.rows];
        for (col, &w) in self.columns().zip(lambda) {
            if w != T::zero() {
                for (o, &v) in out.iter_mut().zip(col) {
                    *o += w * v;
                }
            }
        }
        out
    }

    /// Same matrix with every entry multiplied by `alpha`.
    pub fn scaled(&self, alpha: T) -> Self {
        Self {
            rows: self.rows,
            data: self.data.iter().map(|&v| v * alpha).collect(),
        }
    }

    pub fn is_finite(&self) -> bool {
        vec::all_finite(&self.data)
    }
}

/// Gradients at the center and at `m` points sampled from the ball around it.
///
/// Column 0 is the gradient at the center (`s_0 = x`), columns `1..=m` are the
/// gradients at the sampled points.
#[derive(Debug, Clone)]
pub struct GradientBundle<T> {
    pub center: Vec<T>,
    pub radius: T,
    pub points: Vec<Vec<T>>,
    pub grads: GradientMatrix<T>,
}

impl<T: Scalar> GradientBundle<T> {
    pub fn sample_size(&self) -> usize {
        self.points.len() - 1
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SamplingError {
    #[error("sampled point {index} is not a differentiable point")]
    NondifferentiableSample { index: usize },
    #[error("the bundle center is not a differentiable point")]
    NondifferentiableCenter,
    #[error("sampling radius must be positive and finite")]
    InvalidRadius,
    #[error("sample size must be at least 1")]
    InvalidSampleSize,
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Samples `m` points from `B(x, eps)` and evaluates the gradient at each of
/// them and at `x`. Returns the bundle and the number of gradient evaluations.
pub fn build_bundle<T: Scalar>(
    problem: &Problem<T>,
    x: &[T],
    eps: T,
    m: usize,
    rng: &mut RngStream,
) -> Result<(GradientBundle<T>, usize), SamplingError> {
    let center_grad = problem.gradient(x).map_err(|e| match e {
        ProblemError::NondifferentiablePoint(_) => SamplingError::NondifferentiableCenter,
        other => other.into(),
    })?;
    let (bundle, evals) = build_bundle_with_center(problem, x, center_grad, eps, m, rng)?;
    Ok((bundle, evals + 1))
}

/// Like [`build_bundle`], reusing an already known gradient at the center.
/// Only the `m` sampled gradients are evaluated (and counted).
pub fn build_bundle_with_center<T: Scalar>(
    problem: &Problem<T>,
    x: &[T],
    center_grad: Vec<T>,
    eps: T,
    m: usize,
    rng: &mut RngStream,
) -> Result<(GradientBundle<T>, usize), SamplingError> {
    if !(eps > T::zero() && eps.is_finite()) {
        return Err(SamplingError::InvalidRadius);
    }
    if m == 0 {
        return Err(SamplingError::InvalidSampleSize);
    }
    let n = x.len();
    if n != problem.dim() {
        return Err(ProblemError::DimensionMismatch {
            problem: problem.name().to_string(),
            expected: problem.dim(),
            got: n,
        }
        .into());
    }
    let mut points = Vec::with_capacity(m + 1);
    points.push(x.to_vec());
    for _ in 0..m {
        points.push(sample_ball(rng, x, eps));
    }
    let mut grads = GradientMatrix::new(n);
    grads.push_column(&center_grad);
    for (j, s) in points.iter().enumerate().skip(1) {
        match problem.gradient(s) {
            Ok(g) => grads.push_column(&g),
            Err(ProblemError::NondifferentiablePoint(_)) => {
                return Err(SamplingError::NondifferentiableSample { index: j })
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok((
        GradientBundle {
            center: x.to_vec(),
            radius: eps,
            points,
            grads,
        },
        m,
    ))
}
