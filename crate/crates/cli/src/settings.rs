//! Declarative run settings: a TOML file, solver overrides, and their merge
//! with command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use gradsamp::bench::Metric;
use gradsamp::{Config, LineSearchMode, Method, Scale};
use serde::Deserialize;

/// Solver parameters that may be set from a file or flags. Unset fields keep
/// the scale defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Initial sampling radius
    #[arg(long)]
    pub eps0: Option<f64>,
    /// Initial stationarity tolerance
    #[arg(long)]
    pub nu0: Option<f64>,
    /// Sampling radius reduction factor
    #[arg(long)]
    pub mu: Option<f64>,
    /// Stationarity tolerance reduction factor
    #[arg(long)]
    pub theta: Option<f64>,
    /// Backtracking factor
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Armijo parameter
    #[arg(long)]
    pub c: Option<f64>,
    /// Number of sampled points per iteration (default 2n)
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub eps_opt: Option<f64>,
    #[arg(long)]
    pub nu_opt: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Trial cap of the plain line search
    #[arg(long)]
    pub max_backtracks: Option<usize>,
    /// bals or lbals
    #[arg(long)]
    pub line_search: Option<LineSearchMode>,
    /// Tolerance of the QP optimality certificate
    #[arg(long)]
    pub qp_tol: Option<f64>,
    /// Lower bound on f
    #[arg(long)]
    pub f_l: Option<f64>,
}

macro_rules! merge_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Overrides {
    /// Fields set in `other` win.
    pub fn merged(&self, other: &Overrides) -> Overrides {
        let mut out = self.clone();
        merge_fields!(
            out, other, eps0, nu0, mu, theta, gamma, c, m, eps_opt, nu_opt, max_iters, max_backtracks, line_search,
            qp_tol, f_l
        );
        out
    }

    pub fn apply(&self, mut cfg: Config) -> Config {
        macro_rules! set {
            ($($f:ident),*) => { $( if let Some(v) = self.$f.clone() { cfg.$f = v; } )* };
        }
        set!(eps0, nu0, mu, theta, gamma, c, m, eps_opt, nu_opt, max_iters, max_backtracks, line_search, qp_tol);
        if self.f_l.is_some() {
            cfg.f_l = self.f_l;
        }
        cfg
    }
}

/// `gs`, `gsi` or `both`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Gs,
    Gsi,
    Both,
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::Gs => vec![Method::Gs],
            MethodChoice::Gsi => vec![Method::Gsi],
            MethodChoice::Both => vec![Method::Gs, Method::Gsi],
        }
    }
}

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scale: Option<Scale>,
    pub method: Option<MethodChoice>,
    pub problems: Option<Vec<String>>,
    pub dims: Option<Vec<usize>>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub metrics: Option<Vec<String>>,
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub solver: Overrides,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

pub fn parse_metrics(names: &[String]) -> Result<Vec<Metric>> {
    let mut out = Vec::new();
    for name in names.iter().flat_map(|s| s.split(',')).filter(|s| !s.is_empty()) {
        match name.parse::<Metric>() {
            Ok(m) => out.push(m),
            Err(e) => bail!(e),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_config_parses_and_flags_win() {
        let file: FileConfig = toml::from_str(
            r#"
            scale = "medium"
            method = "both"
            dims = [100]
            runs = 3
            [solver]
            mu = 0.25
            max_iters = 50
            line_search = "lbals"
            "#,
        )
        .unwrap();
        assert_eq!(file.scale, Some(Scale::Medium));
        assert_eq!(file.method, Some(MethodChoice::Both));
        let flags = Overrides {
            max_iters: Some(7),
            ..Overrides::default()
        };
        let merged = file.solver.merged(&flags);
        let cfg = merged.apply(Config::for_dimension(4));
        assert_eq!(cfg.mu, 0.25);
        assert_eq!(cfg.max_iters, 7);
        assert_eq!(cfg.line_search, LineSearchMode::Lbals);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<FileConfig>("speed = 3").is_err());
        assert!(toml::from_str::<FileConfig>("[solver]\nalpha = 3").is_err());
    }

    #[test]
    fn metric_lists() {
        let m = parse_metrics(&["qp_time,iters".into(), "cpu_time".into()]).unwrap();
        assert_eq!(m, vec![Metric::QpTime, Metric::Iters, Metric::CpuTime]);
        assert!(parse_metrics(&["speed".into()]).is_err());
    }
}
