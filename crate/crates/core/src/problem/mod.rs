//! Objective functions and the registry of nonsmooth test problems.
//!
//! Every objective is locally Lipschitz and smooth on an open set of full
//! measure. The analytic gradient is only required to be correct on that set;
//! points where a max/abs argument ties exactly are reported by
//! [`Objective::is_nondifferentiable`].

mod catalog;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

pub use catalog::{catalog, CatalogEntry, Dimension};

/// Errors raised while evaluating or constructing problems.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("dimension mismatch: problem `{problem}` expects n = {expected}, got {got}")]
    DimensionMismatch {
        problem: String,
        expected: usize,
        got: usize,
    },
    #[error("`{0}` is not differentiable at the requested point")]
    NondifferentiablePoint(String),
    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
    #[error("problem `{name}` has fixed dimension {fixed}; n = {requested} was requested")]
    FixedDimension {
        name: String,
        fixed: usize,
        requested: usize,
    },
    #[error("problem `{0}` is scalable; a dimension must be supplied")]
    DimensionRequired(String),
    #[error("problem `{name}` requires n >= {min}, got {requested}")]
    DimensionTooSmall {
        name: String,
        min: usize,
        requested: usize,
    },
}

/// A real-valued objective with an analytic gradient.
pub trait Objective<T: Scalar>: Send + Sync {
    fn value(&self, x: &[T]) -> T;

    /// Writes the gradient at `x` into `out`. Only meaningful where
    /// [`Objective::is_nondifferentiable`] returns `false`.
    fn gradient(&self, x: &[T], out: &mut [T]);

    /// Exact tie detection in the max/abs arguments of the formula.
    fn is_nondifferentiable(&self, _x: &[T]) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convexity {
    Convex,
    Nonconvex,
}

impl fmt::Display for Convexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Convexity::Convex => f.write_str("convex"),
            Convexity::Nonconvex => f.write_str("nonconvex"),
        }
    }
}

/// A fully instantiated test problem: objective, dimension, start point and
/// known (local) minimum.
#[derive(Clone)]
pub struct Problem<T: Scalar> {
    name: String,
    n: usize,
    objective: Arc<dyn Objective<T>>,
    f_star: Option<T>,
    x0: Vec<T>,
    convexity: Convexity,
    scalable: bool,
}

impl<T: Scalar> fmt::Debug for Problem<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("f_star", &self.f_star)
            .field("convexity", &self.convexity)
            .finish_non_exhaustive()
    }
}

impl<T: Scalar> Problem<T> {
    pub fn new(
        name: impl Into<String>,
        objective: Arc<dyn Objective<T>>,
        x0: Vec<T>,
        f_star: Option<T>,
        convexity: Convexity,
    ) -> Self {
        Self {
            name: name.into(),
            n: x0.len(),
            objective,
            f_star,
            x0,
            convexity,
            scalable: false,
        }
    }

    /// Builds a problem from plain closures. Handy for ad-hoc objectives in
    /// tests and examples.
    pub fn from_fns<F, G>(name: impl Into<String>, x0: Vec<T>, f_star: Option<T>, f: F, grad: G) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
        G: Fn(&[T], &mut [T]) + Send + Sync + 'static,
    {
        let objective = FnObjective {
            f,
            grad,
            nondiff: None::<fn(&[T]) -> bool>,
        };
        Self::new(name, Arc::new(objective), x0, f_star, Convexity::Nonconvex)
    }

    /// Like [`Problem::from_fns`] with an exact nondifferentiability predicate.
    pub fn from_fns_with_kinks<F, G, N>(
        name: impl Into<String>,
        x0: Vec<T>,
        f_star: Option<T>,
        f: F,
        grad: G,
        nondiff: N,
    ) -> Self
    where
        F: Fn(&[T]) -> T + Send + Sync + 'static,
        G: Fn(&[T], &mut [T]) + Send + Sync + 'static,
        N: Fn(&[T]) -> bool + Send + Sync + 'static,
    {
        let objective = FnObjective {
            f,
            grad,
            nondiff: Some(nondiff),
        };
        Self::new(name, Arc::new(objective), x0, f_star, Convexity::Nonconvex)
    }

    pub fn with_convexity(mut self, convexity: Convexity) -> Self {
        self.convexity = convexity;
        self
    }

    pub(crate) fn mark_scalable(mut self) -> Self {
        self.scalable = true;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Instance label used in reports: `name` for fixed problems, `name-n` for
    /// scalable ones.
    pub fn label(&self) -> String {
        if self.scalable {
            format!("{}-{}", self.name, self.n)
        } else {
            self.name.clone()
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn f_star(&self) -> Option<T> {
        self.f_star
    }

    pub fn x0(&self) -> &[T] {
        &self.x0
    }

    pub fn convexity(&self) -> Convexity {
        self.convexity
    }

    pub fn objective(&self) -> &dyn Objective<T> {
        self.objective.as_ref()
    }

    fn check_dim(&self, x: &[T]) -> Result<(), ProblemError> {
        if x.len() == self.n {
            Ok(())
        } else {
            Err(ProblemError::DimensionMismatch {
                problem: self.name.clone(),
                expected: self.n,
                got: x.len(),
            })
        }
    }

    pub fn evaluate(&self, x: &[T]) -> Result<T, ProblemError> {
        self.check_dim(x)?;
        Ok(self.objective.value(x))
    }

    pub fn gradient(&self, x: &[T]) -> Result<Vec<T>, ProblemError> {
        self.check_dim(x)?;
        if self.objective.is_nondifferentiable(x) {
            return Err(ProblemError::NondifferentiablePoint(self.name.clone()));
        }
        let mut g = vec![T::zero(); self.n];
        self.objective.gradient(x, &mut g);
        Ok(g)
    }

    pub fn is_nondifferentiable(&self, x: &[T]) -> bool {
        self.objective.is_nondifferentiable(x)
    }
}

struct FnObjective<F, G, N> {
    f: F,
    grad: G,
    nondiff: Option<N>,
}

impl<T, F, G, N> Objective<T> for FnObjective<F, G, N>
where
    T: Scalar,
    F: Fn(&[T]) -> T + Send + Sync,
    G: Fn(&[T], &mut [T]) + Send + Sync,
    N: Fn(&[T]) -> bool + Send + Sync,
{
    fn value(&self, x: &[T]) -> T {
        (self.f)(x)
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        (self.grad)(x, out)
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        self.nondiff.as_ref().is_some_and(|p| p(x))
    }
}

/// Looks up a catalog entry and instantiates it.
///
/// `n` is mandatory for scalable problems. For fixed-dimension problems it may
/// be omitted or must equal the fixed dimension.
pub fn get_problem<T: Scalar>(name: &str, n: Option<usize>) -> Result<Problem<T>, ProblemError> {
    let entry = catalog()
        .iter()
        .find(|e| e.id == name)
        .ok_or_else(|| ProblemError::UnknownProblem(name.to_string()))?;
    entry.instantiate(n)
}

/// Serializable catalog row, the schema of `problems.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub name: String,
    pub title: String,
    /// `"fixed"` or `"scalable"`.
    pub dimension: String,
    pub n_min: usize,
    /// `None` for scalable problems.
    pub n_max: Option<usize>,
    pub convexity: Convexity,
    /// Numeric minimum when it does not depend on `n`.
    pub f_star: Option<f64>,
    pub f_star_rule: String,
    pub x0_rule: String,
    pub provenance: String,
    pub suites: Vec<String>,
}

/// The catalog rendered as records, in registry order.
pub fn catalog_records() -> Vec<CatalogRecord> {
    catalog().iter().map(CatalogEntry::record).collect()
}

/// Pretty JSON rendering of [`catalog_records`], the content of `problems.json`.
pub fn catalog_json() -> String {
    let mut s = serde_json::to_string_pretty(&catalog_records()).expect("catalog serializes");
    s.push('\n');
    s
}
