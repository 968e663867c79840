//! The gradient sampling loop, in two flavors.
//!
//! Each iteration samples `m` points from the ball `B(x, ε)`, collects the
//! gradients there and at `x`, and builds a vector `g` from them:
//!
//! * [`Method::Gs`] always solves the minimum-norm QP over the bundle.
//! * [`Method::Gsi`] first computes the ideal vector, and only solves the QP
//!   when the ideal vector's norm is at most `ν`.
//!
//! If `|g| <= ν` the iterate is kept and `ν`, `ε` shrink by `θ`, `μ`.
//! Otherwise `d = -g/|g|` is searched with an Armijo line search and the new
//! iterate is perturbed if it lands on a nondifferentiable point.
//!
//! A line search that runs out of trials keeps the iterate and shrinks `ε` only;
//! `ν` is unchanged.

mod config;
mod perturb;

use std::io::{self, Write};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::direction::{ideal_direction, normalize, DirectionError, DirectionKind, DirectionResult, QpStats};
use crate::linesearch::{bals, lbals, lbals_threshold};
use crate::problem::{Problem, ProblemError};
use crate::sampling::{build_bundle, build_bundle_with_center, RngStream, SamplingError};
use crate::scalar::{vec, Scalar};

pub use config::{ConfigError, LineSearchMode, Method, Scale, SolverConfig};
pub use perturb::{perturb_iterate, Perturbation, PERTURBATION_ATTEMPTS};

/// Known-minimum stopping rule: met when `|f - f*| / (|f*| + 1) < tol`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct StoppingRule<T> {
    pub f_star: T,
    pub tol: T,
}

impl<T: Scalar> StoppingRule<T> {
    pub fn new(f_star: T, tol: T) -> Self {
        Self { f_star, tol }
    }

    /// The rule for a problem with a known minimum, at the tolerance of the
    /// problem's scale class. `None` when `f*` is unknown.
    pub fn for_problem(problem: &Problem<T>) -> Option<Self> {
        let scale = Scale::from_dim(problem.dim());
        problem.f_star().map(|f| Self::new(f, T::lit(scale.target_tol())))
    }

    pub fn relative_error(&self, f: T) -> T {
        (f - self.f_star).abs() / (self.f_star.abs() + T::one())
    }

    pub fn is_met(&self, f: T) -> bool {
        self.relative_error(f) < self.tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullReason {
    StationarityShrink,
    LbalsNull,
    BalsExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// `ν < ν_opt` and `ε < ε_opt`, or the radius underflowed to zero.
    ToleranceMet,
    TargetMet,
    MaxIters,
    /// A sampled point was nondifferentiable.
    NondiffSample,
}

/// State at the start of iteration `k` and what the iteration did.
///
/// `direction_kind` is `null` for stationarity shrinks; `null_reason` is `null`
/// for serious iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct IterationRecord<T> {
    pub k: usize,
    pub x: Vec<T>,
    pub f_x: T,
    pub direction_kind: Option<DirectionKind>,
    /// Norm of the vector the iteration acted on.
    pub g_norm: T,
    /// Norm of the ideal vector (GSI only).
    pub ideal_norm: Option<T>,
    pub t: T,
    pub eps: T,
    pub nu: T,
    pub serious: bool,
    pub null_reason: Option<NullReason>,
    pub perturbed: bool,
    pub qp_solved: bool,
    /// `f` at the next iterate.
    pub f_next: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct RunReport<T> {
    pub problem: String,
    pub n: usize,
    pub method: Method,
    pub seed: u64,
    pub iters: usize,
    /// Direction iterations that did not solve the QP.
    pub nii: usize,
    /// `nii / direction_iters`, zero when no direction was computed.
    pub pii: f64,
    /// Iterations that computed a search direction (everything except
    /// stationarity shrinks).
    pub direction_iters: usize,
    pub f_eval: usize,
    pub g_eval: usize,
    pub qp_count: usize,
    /// Seconds spent inside the QP solver.
    pub qp_time: f64,
    pub serious_count: usize,
    /// Seconds of wall time for the whole run.
    pub wall_time: f64,
    pub final_f: T,
    pub final_x: Vec<T>,
    pub final_eps: T,
    pub final_nu: T,
    pub success: bool,
    pub stop_reason: StopReason,
}

/// Report plus per-iteration trace.
#[derive(Debug, Clone)]
pub struct RunOutput<T> {
    pub report: RunReport<T>,
    pub trace: Vec<IterationRecord<T>>,
}

#[derive(Debug, thiserror::Error)]
pub enum SolverError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Direction(#[from] DirectionError),
    #[error("start point is not a differentiable point")]
    NondifferentiableStart,
    #[error("start point has dimension {got}, problem has {expected}")]
    StartDimension { expected: usize, got: usize },
    #[error("no admissible perturbation found after {attempts} attempts at iteration {k}")]
    PerturbationFailed { k: usize, attempts: usize },
    #[error("serious iteration bound needs a lower bound f_l")]
    MissingLowerBound,
}

/// GSI from the problem's `x0`.
pub fn gsi_run<T: Scalar>(
    problem: &Problem<T>,
    config: &SolverConfig<T>,
    rng: &mut RngStream,
    target: Option<&StoppingRule<T>>,
) -> Result<RunOutput<T>, SolverError> {
    let config = config.clone().with_method(Method::Gsi);
    run(problem, problem.x0(), &config, rng, target)
}

/// GS from the problem's `x0`.
pub fn gs_run<T: Scalar>(
    problem: &Problem<T>,
    config: &SolverConfig<T>,
    rng: &mut RngStream,
    target: Option<&StoppingRule<T>>,
) -> Result<RunOutput<T>, SolverError> {
    let config = config.clone().with_method(Method::Gs);
    run(problem, problem.x0(), &config, rng, target)
}

/// `ν ← θ ν`, `ε ← μ ε`.
pub fn stationarity_update<T: Scalar>(nu: T, eps: T, config: &SolverConfig<T>) -> (T, T) {
    (config.theta * nu, config.mu * eps)
}

/// Bound on the number of serious iterations in the fixed-tolerance regime
/// with the limited line search:
/// `floor((f(x0) - f_l) / (c ν min(1, γ ε / 3))) + 1`, with `ν = nu0` and
/// `ε = eps0`.
pub fn serious_iteration_bound<T: Scalar>(config: &SolverConfig<T>, f_x0: T) -> Result<u64, SolverError> {
    let f_l = config.f_l.ok_or(SolverError::MissingLowerBound)?;
    let gap = (f_x0 - f_l).to_f64_lossy().max(0.0);
    let step = lbals_threshold(config.eps0, config.gamma).to_f64_lossy();
    let denom = config.c.to_f64_lossy() * config.nu0.to_f64_lossy() * step;
    let q = gap / denom;
    // absorb representation error in the product (e.g. 1 / (0.1 * 0.1))
    let rounded = q.round();
    let floor = if (q - rounded).abs() <= 1e-9 * rounded.max(1.0) { rounded } else { q.floor() };
    Ok(floor as u64 + 1)
}

/// Slack of `f(x_{k+1}) <= f(x_k) - ½ c |x_{k+1} - x_k| |g_k|` for every
/// iteration of a trace: nonnegative values mean the inequality holds.
pub fn descent_slacks<T: Scalar>(output: &RunOutput<T>, c: T) -> Vec<T> {
    let trace = &output.trace;
    let half = T::lit(0.5);
    trace
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let next_x = trace.get(i + 1).map_or(output.report.final_x.as_slice(), |r| r.x.as_slice());
            let step = vec::dist(&rec.x, next_x);
            rec.f_x - half * c * step * rec.g_norm - rec.f_next
        })
        .collect()
}

/// Writes one JSON object per line.
pub fn write_trace_jsonl<T: Scalar, W: Write>(mut out: W, trace: &[IterationRecord<T>]) -> io::Result<()> {
    for rec in trace {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace_jsonl<T: Scalar>(text: &str) -> Result<Vec<IterationRecord<T>>, serde_json::Error> {
    text.lines().filter(|l| !l.trim().is_empty()).map(serde_json::from_str).collect()
}

/// Runs the method in `config.method` from `x_start`.
pub fn run<T: Scalar>(
    problem: &Problem<T>,
    x_start: &[T],
    config: &SolverConfig<T>,
    rng: &mut RngStream,
    target: Option<&StoppingRule<T>>,
) -> Result<RunOutput<T>, SolverError> {
    config.validate()?;
    if x_start.len() != problem.dim() {
        return Err(SolverError::StartDimension {
            expected: problem.dim(),
            got: x_start.len(),
        });
    }
    if problem.is_nondifferentiable(x_start) {
        return Err(SolverError::NondifferentiableStart);
    }
    let started = Instant::now();
    let objective = problem.objective();

    let mut x = x_start.to_vec();
    let mut f_x = objective.value(&x);
    let mut f_eval = 1usize;
    let mut g_eval = 0usize;
    let mut qp = QpStats::default();
    let mut eps = config.eps0;
    let mut nu = config.nu0;
    let mut center_grad: Option<Vec<T>> = None;
    let mut trace = Vec::new();
    let mut nii = 0usize;
    let mut direction_iters = 0usize;
    let mut serious_count = 0usize;

    let mut k = 0usize;
    let stop_reason = if target.is_some_and(|r| r.is_met(f_x)) {
        StopReason::TargetMet
    } else {
        loop {
            if !(nu >= config.nu_opt || eps >= config.eps_opt) || eps <= T::zero() {
                break StopReason::ToleranceMet;
            }
            if k >= config.max_iters {
                break StopReason::MaxIters;
            }

            let sampled = match center_grad.take() {
                Some(g0) => build_bundle_with_center(problem, &x, g0, eps, config.m, rng),
                None => build_bundle(problem, &x, eps, config.m, rng),
            };
            let bundle = match sampled {
                Ok((bundle, evals)) => {
                    g_eval += evals;
                    bundle
                }
                Err(SamplingError::NondifferentiableSample { .. }) => break StopReason::NondiffSample,
                Err(SamplingError::Problem(e)) => return Err(e.into()),
                Err(SamplingError::NondifferentiableCenter) => return Err(SolverError::NondifferentiableStart),
                Err(SamplingError::InvalidRadius) => break StopReason::ToleranceMet,
                Err(e @ SamplingError::InvalidSampleSize) => return Err(ConfigError(e.to_string()).into()),
            };
            center_grad = Some(bundle.grads.column(0).to_vec());

            let (direction, ideal_norm, qp_solved) = match config.method {
                Method::Gs => (qp.solve(&bundle.grads, config.qp_tol)?, None, true),
                Method::Gsi => {
                    let ideal = ideal_direction(&bundle.grads);
                    let norm = ideal.g_norm();
                    if norm <= nu {
                        (qp.solve(&bundle.grads, config.qp_tol)?, Some(norm), true)
                    } else {
                        (ideal, Some(norm), false)
                    }
                }
            };
            let g_norm = direction.g_norm();
            let mut record = IterationRecord {
                k,
                x: x.clone(),
                f_x,
                direction_kind: None,
                g_norm,
                ideal_norm,
                t: T::zero(),
                eps,
                nu,
                serious: false,
                null_reason: None,
                perturbed: false,
                qp_solved,
                f_next: f_x,
            };

            let d = match stationarity_check(&direction, nu) {
                None => {
                    (nu, eps) = stationarity_update(nu, eps, config);
                    record.null_reason = Some(NullReason::StationarityShrink);
                    trace.push(record);
                    k += 1;
                    continue;
                }
                Some(d) => d,
            };
            direction_iters += 1;
            if !qp_solved {
                nii += 1;
            }
            record.direction_kind = Some(direction.kind);

            let f = |y: &[T]| objective.value(y);
            let search = match config.line_search {
                LineSearchMode::Bals => {
                    bals(f, &x, f_x, &direction.g, &d, config.gamma, config.c, config.max_backtracks)
                }
                LineSearchMode::Lbals => lbals(f, &x, f_x, &direction.g, &d, eps, config.gamma, config.c),
            };
            f_eval += search.evaluations;
            if !search.accepted() {
                if search.exhausted {
                    eps = config.mu * eps;
                    record.null_reason = Some(NullReason::BalsExhausted);
                } else {
                    record.null_reason = Some(NullReason::LbalsNull);
                }
                trace.push(record);
                k += 1;
                continue;
            }

            let f_candidate = search.f_new.expect("accepted step has a value");
            let moved = perturb_iterate(problem, &x, f_x, search.t, &d, f_candidate, eps, g_norm, config.c, rng)
                .ok_or(SolverError::PerturbationFailed {
                    k,
                    attempts: PERTURBATION_ATTEMPTS,
                })?;
            f_eval += moved.evaluations;
            record.perturbed = moved.moved;
            record.t = search.t;
            record.serious = moved.x != x;
            record.f_next = moved.f;
            x = moved.x;
            f_x = moved.f;
            center_grad = None;
            if record.serious {
                serious_count += 1;
            }
            trace.push(record);
            k += 1;

            if target.is_some_and(|r| r.is_met(f_x)) {
                break StopReason::TargetMet;
            }
        }
    };

    let success = match target {
        Some(_) => stop_reason == StopReason::TargetMet,
        None => stop_reason == StopReason::ToleranceMet,
    };
    let report = RunReport {
        problem: problem.label(),
        n: problem.dim(),
        method: config.method,
        seed: rng.seed(),
        iters: k,
        nii,
        pii: if direction_iters == 0 { 0.0 } else { nii as f64 / direction_iters as f64 },
        direction_iters,
        f_eval,
        g_eval,
        qp_count: qp.count,
        qp_time: seconds(qp.time),
        serious_count,
        wall_time: seconds(started.elapsed()),
        final_f: f_x,
        final_x: x,
        final_eps: eps,
        final_nu: nu,
        success,
        stop_reason,
    };
    Ok(RunOutput { report, trace })
}

/// `None` when `|g| <= ν`, else the normalized search direction.
fn stationarity_check<T: Scalar>(direction: &DirectionResult<T>, nu: T) -> Option<Vec<T>> {
    if direction.g_norm() <= nu {
        return None;
    }
    direction.d.clone().or_else(|| normalize(&direction.g).ok())
}

fn seconds(d: Duration) -> f64 {
    d.as_secs_f64()
}
