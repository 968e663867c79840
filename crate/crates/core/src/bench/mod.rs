//! Seeded multi-problem experiments, result tables and performance profiles.
//!
//! Every run starts from a point drawn uniformly from the ball around the
//! problem's `x0` with radius `|x0| / n`, redrawn until it is a differentiable
//! point. The start point depends only on `(problem, seed)`, so all methods
//! see the same start for a given seed.

mod profile;
mod report;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::problem::{catalog, Problem, ProblemError};
use crate::sampling::{sample_ball, RngStream};
use crate::scalar::{vec, Scalar};
use crate::solver::{run, Method, RunReport, Scale, SolverConfig};

pub use crate::solver::StoppingRule;
pub use profile::{performance_profile, Metric, ProfileCurve, ProfileEntry, ProfileError, ProfileTable};
pub use report::{
    emit_reports, profile_from_rows, read_profile_csv, read_results_csv, render_profile_svg, write_profile_csv, write_profile_svg, write_results_csv,
    EmittedFiles, ProfileColumns, ReportError, ResultRow, CSV_HEADER,
};

/// Stream id of the start-point generator; the solver uses stream 0.
const START_STREAM: u64 = 1;

/// Cap on redraws of a nondifferentiable start point.
const START_REDRAWS: usize = 1000;

/// Dimensions at which the scalable problems of a suite are instantiated.
pub fn suite_dims(scale: Scale) -> &'static [usize] {
    match scale {
        Scale::Small => &[],
        Scale::Medium => &[100, 200],
        Scale::Large => &[500, 1000],
    }
}

/// Catalog problems of a suite. Fixed-dimension problems ignore `dims`;
/// scalable ones are instantiated once per dimension (the suite defaults when
/// `dims` is empty).
pub fn suite_problems(scale: Scale, dims: &[usize]) -> Result<Vec<Problem<f64>>, ProblemError> {
    let dims = if dims.is_empty() { suite_dims(scale) } else { dims };
    let mut out = Vec::new();
    for entry in catalog().iter().filter(|e| e.suites.contains(&scale.name())) {
        if entry.is_scalable() {
            for &n in dims {
                out.push(entry.instantiate(Some(n))?);
            }
        } else {
            out.push(entry.instantiate(None)?);
        }
    }
    Ok(out)
}

/// Randomized start for `(problem, seed)`.
pub fn start_point<T: Scalar>(problem: &Problem<T>, seed: u64) -> Vec<T> {
    let x0 = problem.x0();
    let radius = vec::norm(x0) / T::from_usize_lossy(problem.dim());
    if !(radius > T::zero()) {
        return x0.to_vec();
    }
    let mut rng = RngStream::with_stream(seed, START_STREAM);
    for _ in 0..START_REDRAWS {
        let x = sample_ball(&mut rng, x0, radius);
        if !problem.is_nondifferentiable(&x) {
            return x;
        }
    }
    x0.to_vec()
}

/// Default configuration for a problem in a suite: dimension-based
/// parameters with the scale-class `nu0`.
pub fn default_config(problem: &Problem<f64>, scale: Scale) -> SolverConfig<f64> {
    SolverConfig::for_dimension(problem.dim()).with_scale(scale)
}

/// One `(problem, method, seed)` run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub problem: String,
    pub method: Method,
    pub seed: u64,
    pub config: SolverConfig<f64>,
    pub target: Option<StoppingRule<f64>>,
    pub start: Vec<f64>,
    /// `None` when the run aborted with an error.
    pub report: Option<RunReport<f64>>,
    pub error: Option<String>,
    /// Wall time including failed runs, in seconds.
    pub cpu_time: f64,
}

impl RunRecord {
    pub fn success(&self) -> bool {
        self.report.as_ref().is_some_and(|r| r.success)
    }
}

#[derive(Debug, Clone)]
pub struct SuiteOptions {
    pub methods: Vec<Method>,
    pub runs_per_problem: usize,
    pub base_seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    pub scale: Scale,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            methods: vec![Method::Gs, Method::Gsi],
            runs_per_problem: 5,
            base_seed: 0,
            jobs: None,
            scale: Scale::Small,
        }
    }
}

/// Runs every `(problem, seed, method)` triple. Seeds are
/// `base_seed + run index`. Per-run failures are recorded, never propagated.
///
/// Records come back ordered by problem, then seed, then method, regardless of
/// parallelism.
pub fn run_suite<F>(problems: &[Problem<f64>], options: &SuiteOptions, config_for: F) -> Vec<RunRecord>
where
    F: Fn(&Problem<f64>) -> SolverConfig<f64> + Sync,
{
    let tasks: Vec<(usize, u64, Method)> = (0..problems.len())
        .flat_map(|p| {
            (0..options.runs_per_problem as u64).flat_map(move |r| {
                options
                    .methods
                    .iter()
                    .map(move |&m| (p, options.base_seed.wrapping_add(r), m))
            })
        })
        .collect();
    let work = || {
        tasks
            .par_iter()
            .map(|&(p, seed, method)| {
                let problem = &problems[p];
                let config = config_for(problem).with_method(method).with_seed(seed);
                run_one(problem, config, options.scale)
            })
            .collect::<Vec<_>>()
    };
    match options.jobs {
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build() {
            Ok(pool) => pool.install(work),
            Err(e) => {
                log::warn!("could not build a {j}-thread pool ({e}); using the global pool");
                work()
            }
        },
        None => work(),
    }
}

/// One seeded run from the randomized start, with the problem's stopping rule
/// at the tolerance of `scale`.
pub fn run_one(problem: &Problem<f64>, config: SolverConfig<f64>, scale: Scale) -> RunRecord {
    let seed = config.seed;
    let target = problem.f_star().map(|f| StoppingRule::new(f, scale.target_tol()));
    let start = start_point(problem, seed);
    let mut rng = RngStream::new(seed);
    let clock = Instant::now();
    let outcome = run(problem, &start, &config, &mut rng, target.as_ref());
    let cpu_time = clock.elapsed().as_secs_f64();
    let (report, error) = match outcome {
        Ok(out) => (Some(out.report), None),
        Err(e) => {
            log::warn!("{} {} seed {seed}: {e}", problem.label(), config.method);
            (None, Some(e.to_string()))
        }
    };
    RunRecord {
        problem: problem.label(),
        method: config.method,
        seed,
        config,
        target,
        start,
        report,
        error,
        cpu_time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_points_lie_in_the_ball_and_repeat() {
        let p = crate::problem::get_problem::<f64>("mifflin2", None).unwrap();
        let r = vec::norm(p.x0()) / 2.0;
        for seed in 0..20 {
            let a = start_point(&p, seed);
            assert!(vec::dist(&a, p.x0()) <= r);
            assert_eq!(a, start_point(&p, seed));
        }
        assert_ne!(start_point(&p, 0), start_point(&p, 1));
    }

    #[test]
    fn suite_composition() {
        let small = suite_problems(Scale::Small, &[]).unwrap();
        assert!(small.iter().all(|p| p.dim() <= 50));
        for name in ["ql", "wolfe", "crescent", "mifflin2"] {
            assert!(small.iter().any(|p| p.name() == name));
        }
        let medium = suite_problems(Scale::Medium, &[100]).unwrap();
        assert!(medium.iter().all(|p| p.dim() == 100));
    }

    #[test]
    fn suite_cardinality_and_pairing() {
        let problems: Vec<_> = ["ql", "wolfe"]
            .iter()
            .map(|n| crate::problem::get_problem::<f64>(n, None).unwrap())
            .collect();
        let opts = SuiteOptions {
            runs_per_problem: 3,
            base_seed: 10,
            jobs: Some(2),
            ..SuiteOptions::default()
        };
        let recs = run_suite(&problems, &opts, |p| default_config(p, Scale::Small));
        assert_eq!(recs.len(), 2 * 3 * 2);
        for pair in recs.chunks(2) {
            assert_eq!(pair[0].problem, pair[1].problem);
            assert_eq!(pair[0].seed, pair[1].seed);
            assert_eq!(pair[0].start, pair[1].start);
            assert_ne!(pair[0].method, pair[1].method);
        }
        assert_eq!(recs[0].seed, 10);
        assert_eq!(recs[11].seed, 12);
    }
}
