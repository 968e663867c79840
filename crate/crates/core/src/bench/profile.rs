//! Dolan–Moré performance profiles.
//!
//! For each instance the ratio of a solver's metric to the best metric over
//! all solvers is formed; failures get ratio `+inf`. The profile of a solver is
//! `ρ(τ) = #{instances with ratio <= τ} / #instances`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    CpuTime,
    QpTime,
    QpCount,
    FEval,
    GEval,
    Iters,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::CpuTime,
        Metric::QpTime,
        Metric::QpCount,
        Metric::FEval,
        Metric::GEval,
        Metric::Iters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::CpuTime => "cpu_time",
            Metric::QpTime => "qp_time",
            Metric::QpCount => "qp_count",
            Metric::FEval => "f_eval",
            Metric::GEval => "g_eval",
            Metric::Iters => "iters",
        }
    }

    /// Smallest value used when forming ratios. Counts can be zero (a GSI run
    /// may never solve a QP) and timers can read zero, which would make the
    /// ratio undefined.
    pub fn floor(self) -> f64 {
        match self {
            Metric::CpuTime | Metric::QpTime => 1e-6,
            _ => 1.0,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Metric::ALL.iter().map(|m| m.name()).collect();
                format!("unknown metric `{s}` (expected one of {})", names.join(", "))
            })
    }
}

/// Metric value of one solver on one instance; `None` marks a failure.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileEntry {
    pub solver: String,
    pub instance: String,
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub solver: String,
    /// `ρ(τ)` at each of [`ProfileTable::taus`].
    pub rho: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    pub metric: Metric,
    pub solvers: Vec<String>,
    /// Instances kept in the profile.
    pub instances: Vec<String>,
    /// Instances dropped because every solver failed on them.
    pub excluded: Vec<String>,
    /// `values[s][i]`; `None` is a failure.
    pub values: Vec<Vec<Option<f64>>>,
    /// `ratios[s][i]`; failures are `+inf`.
    pub ratios: Vec<Vec<f64>>,
    /// Breakpoints of the step functions: `1` and every distinct finite ratio,
    /// ascending.
    pub taus: Vec<f64>,
    pub curves: Vec<ProfileCurve>,
}

impl ProfileTable {
    pub fn curve(&self, solver: &str) -> Option<&ProfileCurve> {
        self.curves.iter().find(|c| c.solver == solver)
    }

    /// `ρ_s(τ)` for arbitrary `τ`.
    pub fn rho(&self, solver: &str, tau: f64) -> Option<f64> {
        let s = self.solvers.iter().position(|n| n == solver)?;
        Some(fraction_within(&self.ratios[s], tau))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProfileError {
    #[error("a performance profile needs at least two solvers, got {0}")]
    TooFewSolvers(usize),
    #[error("no instance has a successful run")]
    NoInstances,
    #[error("solver `{solver}` has no entry for instance `{instance}`")]
    MissingEntry { solver: String, instance: String },
    #[error("metric value {value} for `{solver}` on `{instance}` is negative or not finite")]
    BadValue { solver: String, instance: String, value: f64 },
}

fn fraction_within(ratios: &[f64], tau: f64) -> f64 {
    let hits = ratios.iter().filter(|&&r| r <= tau).count();
    hits as f64 / ratios.len() as f64
}

/// Builds the profile. Solvers and instances keep their first-appearance
/// order. Values below [`Metric::floor`] are raised to it before ratios are
/// formed.
pub fn performance_profile(metric: Metric, entries: &[ProfileEntry]) -> Result<ProfileTable, ProfileError> {
    let mut solvers: Vec<String> = Vec::new();
    let mut instances: Vec<String> = Vec::new();
    let mut cells: BTreeMap<(usize, usize), Option<f64>> = BTreeMap::new();
    for e in entries {
        if let Some(v) = e.value {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ProfileError::BadValue {
                    solver: e.solver.clone(),
                    instance: e.instance.clone(),
                    value: v,
                });
            }
        }
        let s = index_of(&mut solvers, &e.solver);
        let i = index_of(&mut instances, &e.instance);
        cells.insert((s, i), e.value);
    }
    if solvers.len() < 2 {
        return Err(ProfileError::TooFewSolvers(solvers.len()));
    }

    let floor = metric.floor();
    let mut kept = Vec::new();
    let mut excluded = Vec::new();
    let mut values: Vec<Vec<Option<f64>>> = vec![Vec::new(); solvers.len()];
    for (i, inst) in instances.iter().enumerate() {
        let mut column = Vec::with_capacity(solvers.len());
        for (s, solver) in solvers.iter().enumerate() {
            match cells.get(&(s, i)) {
                Some(v) => column.push(*v),
                None => {
                    return Err(ProfileError::MissingEntry {
                        solver: solver.clone(),
                        instance: inst.clone(),
                    })
                }
            }
        }
        if column.iter().all(Option::is_none) {
            log::warn!("instance `{inst}` failed for every solver; excluded from the {metric} profile");
            excluded.push(inst.clone());
            continue;
        }
        kept.push(inst.clone());
        for (s, v) in column.into_iter().enumerate() {
            values[s].push(v);
        }
    }
    if kept.is_empty() {
        return Err(ProfileError::NoInstances);
    }

    let mut ratios: Vec<Vec<f64>> = vec![Vec::with_capacity(kept.len()); solvers.len()];
    for i in 0..kept.len() {
        let best = values
            .iter()
            .filter_map(|row| row[i])
            .map(|v| v.max(floor))
            .fold(f64::INFINITY, f64::min);
        for (s, row) in values.iter().enumerate() {
            ratios[s].push(match row[i] {
                Some(v) => v.max(floor) / best,
                None => f64::INFINITY,
            });
        }
    }

    let mut taus: Vec<f64> = ratios.iter().flatten().copied().filter(|r| r.is_finite()).collect();
    taus.push(1.0);
    taus.sort_by(f64::total_cmp);
    taus.dedup();
    let curves = solvers
        .iter()
        .zip(&ratios)
        .map(|(solver, r)| ProfileCurve {
            solver: solver.clone(),
            rho: taus.iter().map(|&t| fraction_within(r, t)).collect(),
        })
        .collect();

    Ok(ProfileTable {
        metric,
        solvers,
        instances: kept,
        excluded,
        values,
        ratios,
        taus,
        curves,
    })
}

fn index_of(list: &mut Vec<String>, name: &str) -> usize {
    match list.iter().position(|s| s == name) {
        Some(i) => i,
        None => {
            list.push(name.to_string());
            list.len() - 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entries(rows: &[(&str, &str, Option<f64>)]) -> Vec<ProfileEntry> {
        rows.iter()
            .map(|&(s, i, v)| ProfileEntry {
                solver: s.into(),
                instance: i.into(),
                value: v,
            })
            .collect()
    }

    #[test]
    fn dominant_solver() {
        let t = performance_profile(
            Metric::Iters,
            &entries(&[("a", "p", Some(1.0)), ("b", "p", Some(3.0)), ("a", "q", Some(2.0)), ("b", "q", Some(5.0))]),
        )
        .unwrap();
        assert_eq!(t.rho("a", 1.0), Some(1.0));
        assert_eq!(t.rho("b", 1.0), Some(0.0));
    }

    #[test]
    fn ties_count_for_both() {
        let t = performance_profile(
            Metric::Iters,
            &entries(&[("a", "p", Some(4.0)), ("b", "p", Some(4.0))]),
        )
        .unwrap();
        assert_eq!(t.rho("a", 1.0), Some(1.0));
        assert_eq!(t.rho("b", 1.0), Some(1.0));
    }

    #[test]
    fn two_by_two_hand_matrix() {
        // solvers x instances [[1, 2], [4, 2]]
        // ratios: solver 1 -> [1, 1], solver 2 -> [4, 1]
        let t = performance_profile(
            Metric::FEval,
            &entries(&[("s1", "i1", Some(1.0)), ("s1", "i2", Some(2.0)), ("s2", "i1", Some(4.0)), ("s2", "i2", Some(2.0))]),
        )
        .unwrap();
        assert_eq!(t.taus, vec![1.0, 4.0]);
        assert_eq!(t.curve("s1").unwrap().rho, vec![1.0, 1.0]);
        assert_eq!(t.curve("s2").unwrap().rho, vec![0.5, 1.0]);
        assert_eq!(t.rho("s2", 2.0), Some(0.5));

        // same matrix read as instances x solvers: ratios s1 -> [1, 2], s2 -> [2, 1]
        let t = performance_profile(
            Metric::FEval,
            &entries(&[("s1", "i1", Some(1.0)), ("s2", "i1", Some(2.0)), ("s1", "i2", Some(4.0)), ("s2", "i2", Some(2.0))]),
        )
        .unwrap();
        assert_eq!(t.taus, vec![1.0, 2.0]);
        assert_eq!(t.curve("s1").unwrap().rho, vec![0.5, 1.0]);
        assert_eq!(t.curve("s2").unwrap().rho, vec![0.5, 1.0]);
    }

    #[test]
    fn failures_and_exclusions() {
        let t = performance_profile(
            Metric::Iters,
            &entries(&[
                ("a", "p", Some(2.0)),
                ("b", "p", None),
                ("a", "q", None),
                ("b", "q", None),
                ("a", "r", Some(3.0)),
                ("b", "r", Some(1.0)),
            ]),
        )
        .unwrap();
        assert_eq!(t.excluded, vec!["q".to_string()]);
        assert_eq!(t.instances.len(), 2);
        assert_eq!(t.ratios[1][0], f64::INFINITY);
        // b plateaus at its success fraction
        assert_eq!(t.rho("b", 1e300), Some(0.5));
        assert_eq!(t.rho("a", 3.0), Some(1.0));
    }

    #[test]
    fn zero_counts_use_the_floor() {
        let t = performance_profile(
            Metric::QpCount,
            &entries(&[("gsi", "p", Some(0.0)), ("gs", "p", Some(7.0))]),
        )
        .unwrap();
        assert_eq!(t.ratios[0][0], 1.0);
        assert_eq!(t.ratios[1][0], 7.0);
    }

    #[test]
    fn errors() {
        assert_eq!(
            performance_profile(Metric::Iters, &entries(&[("a", "p", Some(1.0))])),
            Err(ProfileError::TooFewSolvers(1))
        );
        assert!(matches!(
            performance_profile(Metric::Iters, &entries(&[("a", "p", Some(1.0)), ("b", "q", Some(1.0))])),
            Err(ProfileError::MissingEntry { .. })
        ));
        assert_eq!(
            performance_profile(Metric::Iters, &entries(&[("a", "p", None), ("b", "p", None)])),
            Err(ProfileError::NoInstances)
        );
    }
}
