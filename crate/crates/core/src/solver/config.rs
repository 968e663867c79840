use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::direction::DEFAULT_QP_TOL;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Gradient sampling: minimum-norm QP at every iteration.
    Gs,
    /// Gradient sampling with the ideal direction; the QP is solved only when
    /// the ideal vector is within the stationarity tolerance.
    Gsi,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Gs => "gs",
            Method::Gsi => "gsi",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gs" => Ok(Method::Gs),
            "gsi" => Ok(Method::Gsi),
            other => Err(format!("unknown method `{other}` (expected gs or gsi)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineSearchMode {
    Bals,
    Lbals,
}

impl FromStr for LineSearchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bals" => Ok(LineSearchMode::Bals),
            "lbals" => Ok(LineSearchMode::Lbals),
            other => Err(format!("unknown line search `{other}` (expected bals or lbals)")),
        }
    }
}

/// Problem scale classes: `n <= 50`, `50 < n <= 200`, `n > 200`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    Small,
    Medium,
    Large,
}

impl Scale {
    pub fn from_dim(n: usize) -> Self {
        if n <= 50 {
            Scale::Small
        } else if n <= 200 {
            Scale::Medium
        } else {
            Scale::Large
        }
    }

    /// Initial stationarity tolerance.
    pub fn nu0(self) -> f64 {
        match self {
            Scale::Small => 1e-3,
            Scale::Medium => 1e-2,
            Scale::Large => 1e-1,
        }
    }

    /// Relative tolerance of the known-minimum stopping rule.
    pub fn target_tol(self) -> f64 {
        match self {
            Scale::Small => 5e-4,
            Scale::Medium | Scale::Large => 1e-3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Scale::Small => "small",
            Scale::Medium => "medium",
            Scale::Large => "large",
        }
    }
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "small" => Ok(Scale::Small),
            "medium" => Ok(Scale::Medium),
            "large" => Ok(Scale::Large),
            other => Err(format!("unknown scale `{other}` (expected small, medium or large)")),
        }
    }
}

/// Parameters of the gradient sampling loop and its line searches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar"))]
pub struct SolverConfig<T> {
    /// Initial sampling radius.
    pub eps0: T,
    /// Initial stationarity tolerance.
    pub nu0: T,
    /// Sampling radius reduction factor.
    pub mu: T,
    /// Stationarity tolerance reduction factor.
    pub theta: T,
    /// Backtracking factor.
    pub gamma: T,
    /// Armijo parameter.
    pub c: T,
    /// Number of sampled points (the bundle holds `m + 1` gradients).
    pub m: usize,
    /// The loop runs while `nu >= nu_opt` or `eps >= eps_opt`.
    pub eps_opt: T,
    pub nu_opt: T,
    pub max_iters: usize,
    /// Trial cap of the plain line search.
    pub max_backtracks: usize,
    pub line_search: LineSearchMode,
    pub method: Method,
    pub seed: u64,
    /// Lower bound on `f`, used by [`crate::solver::serious_iteration_bound`].
    pub f_l: Option<T>,
    /// Tolerance of the minimum-norm QP optimality certificate.
    pub qp_tol: T,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid solver configuration: {0}")]
pub struct ConfigError(pub String);

impl<T: Scalar> SolverConfig<T> {
    /// Default parameters for an `n`-dimensional problem: `m = 2n`,
    /// `eps0 = 1e-3` for `n <= 10` else `1e-2`, `nu0` by scale class,
    /// `mu = theta = gamma = 0.5`, `c = 1e-6`, 2000 iterations, 50 line-search
    /// trials.
    ///
    /// `nu_opt = eps_opt = 0`, so without a target the run only ends at the
    /// iteration cap.
    pub fn for_dimension(n: usize) -> Self {
        let scale = Scale::from_dim(n);
        Self {
            eps0: T::lit(if n <= 10 { 1e-3 } else { 1e-2 }),
            nu0: T::lit(scale.nu0()),
            mu: T::lit(0.5),
            theta: T::lit(0.5),
            gamma: T::lit(0.5),
            c: T::lit(1e-6),
            m: 2 * n,
            eps_opt: T::zero(),
            nu_opt: T::zero(),
            max_iters: 2000,
            max_backtracks: 50,
            line_search: LineSearchMode::Bals,
            method: Method::Gsi,
            seed: 0,
            f_l: None,
            qp_tol: T::lit(DEFAULT_QP_TOL),
        }
    }

    /// Applies the scale-class tolerance `nu0` regardless of `n`.
    pub fn with_scale(mut self, scale: Scale) -> Self {
        self.nu0 = T::lit(scale.nu0());
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Fixed-tolerance regime: limited line search with `nu0 = nu_opt = nu` and
    /// `eps0 = eps_opt = eps`. The run stops at the first stationarity
    /// detection, and the number of serious iterations is bounded by
    /// [`crate::solver::serious_iteration_bound`].
    pub fn fixed_tolerance_regime(mut self, nu: T, eps: T) -> Self {
        self.line_search = LineSearchMode::Lbals;
        self.nu0 = nu;
        self.nu_opt = nu;
        self.eps0 = eps;
        self.eps_opt = eps;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let unit = |name: &str, v: T| {
            if v > T::zero() && v < T::one() {
                Ok(())
            } else {
                Err(ConfigError(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        unit("mu", self.mu)?;
        unit("theta", self.theta)?;
        unit("gamma", self.gamma)?;
        unit("c", self.c)?;
        if !(self.eps0 > T::zero() && self.eps0.is_finite()) {
            return Err(ConfigError(format!("eps0 must be positive, got {}", self.eps0)));
        }
        if !(self.nu0 > T::zero() && self.nu0.is_finite()) {
            return Err(ConfigError(format!("nu0 must be positive, got {}", self.nu0)));
        }
        if !(self.eps_opt >= T::zero()) || !(self.nu_opt >= T::zero()) {
            return Err(ConfigError("eps_opt and nu_opt must be nonnegative".into()));
        }
        if self.m < 1 {
            return Err(ConfigError("sample size m must be at least 1".into()));
        }
        if self.max_iters < 1 {
            return Err(ConfigError("max_iters must be at least 1".into()));
        }
        if self.line_search == LineSearchMode::Bals && self.max_backtracks < 1 {
            return Err(ConfigError("max_backtracks must be at least 1".into()));
        }
        if !(self.qp_tol > T::zero()) {
            return Err(ConfigError("qp_tol must be positive".into()));
        }
        Ok(())
    }
}
