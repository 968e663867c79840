//! Gradient sampling for nonsmooth, possibly nonconvex, locally Lipschitz
//! functions.
//!
//! The solver comes in two variants sharing one loop: classic gradient
//! sampling (GS), which solves a minimum-norm quadratic program every
//! iteration, and GSI, which first tries the componentwise *ideal* vector of
//! the sampled gradients and falls back to the QP only near stationarity.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`, and the `*32` aliases fix `f32`.
//!
//! ```
//! use gradsamp::{get_problem, gsi_run, Config, RngStream, StoppingRule};
//!
//! let problem = get_problem::<f64>("mifflin2", None).unwrap();
//! let config = Config::for_dimension(problem.dim());
//! let rule = StoppingRule::for_problem(&problem).unwrap();
//! let out = gsi_run(&problem, &config, &mut RngStream::new(1), Some(&rule)).unwrap();
//! assert!(out.report.success);
//! ```

pub mod bench;
pub mod direction;
pub mod linesearch;
pub mod problem;
pub mod sampling;
pub mod scalar;
pub mod solver;

pub use direction::{ideal_direction, ideal_vector, min_norm_qp, normalize, DirectionKind, DirectionResult};
pub use problem::{catalog_json, catalog_records, get_problem, Convexity, Objective, ProblemError};
pub use sampling::{build_bundle, sample_ball, GradientMatrix, RngStream};
pub use scalar::Scalar;
pub use solver::{
    gs_run, gsi_run, run, LineSearchMode, Method, NullReason, RunOutput, Scale, SolverError, StopReason,
    StoppingRule,
};

pub type Problem = problem::Problem<f64>;
pub type Problem32 = problem::Problem<f32>;
pub type Config = solver::SolverConfig<f64>;
pub type Config32 = solver::SolverConfig<f32>;
pub type Report = solver::RunReport<f64>;
pub type Report32 = solver::RunReport<f32>;
pub type Record = solver::IterationRecord<f64>;
pub type Record32 = solver::IterationRecord<f32>;
pub type Bundle = sampling::GradientBundle<f64>;
pub type Bundle32 = sampling::GradientBundle<f32>;
