//! Nonsmooth test functions with analytic gradients.
//!
//! Formulas follow the standard nonsmooth collections (Lukšan–Vlček minimax
//! problems, Haarala–Miettinen–Mäkelä large-scale problems and the
//! Lewis–Overton examples). Indices in comments are 1-based, code is 0-based.
//!
//! Missing from the catalog: Condition Number and the two partly smooth
//! functions (their matrix data is not reproduced here).

use std::sync::Arc;

use super::{CatalogRecord, Convexity, Objective, Problem, ProblemError};
use crate::scalar::Scalar;

#[inline]
fn c<T: Scalar>(v: f64) -> T {
    T::lit(v)
}

/// Sign with `sign(0) = 0`.
#[inline]
fn sgn<T: Scalar>(v: T) -> T {
    if v > T::zero() {
        T::one()
    } else if v < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

/// Index of the largest entry and whether the maximum is attained more than once.
fn argmax<T: Scalar>(vals: &[T]) -> (usize, bool) {
    let mut best = 0;
    for (i, &v) in vals.iter().enumerate().skip(1) {
        if v > vals[best] {
            best = i;
        }
    }
    let tie = vals
        .iter()
        .enumerate()
        .any(|(i, &v)| i != best && v == vals[best]);
    (best, tie)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Fixed(usize),
    Scalable { min: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Ql,
    Wong1,
    Wolfe,
    Spiral,
    RosenbrockNs,
    Crescent,
    Mifflin2,
    Evd52,
    Hs78,
    L1Hilb,
    MxHilb,
    ChainedLq,
    ChainedCb3I,
    ChainedCb3II,
    ActiveFaces,
    Brown2,
    ChainedMifflin2,
    ChainedCrescentI,
    ChainedCrescentII,
    Maxq,
    TiltedNorm,
    Ncr1,
    Ncr2,
}

/// Static metadata of one catalog entry.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub title: &'static str,
    pub dimension: Dimension,
    pub convexity: Convexity,
    pub f_star_rule: &'static str,
    pub x0_rule: &'static str,
    pub provenance: &'static str,
    /// Benchmark suites (`small`, `medium`, `large`) the problem belongs to.
    pub suites: &'static [&'static str],
    kind: Kind,
}

impl CatalogEntry {
    pub fn is_scalable(&self) -> bool {
        matches!(self.dimension, Dimension::Scalable { .. })
    }

    /// A modest dimension used by self-tests of scalable problems.
    pub fn default_test_dim(&self) -> usize {
        match self.dimension {
            Dimension::Fixed(n) => n,
            Dimension::Scalable { min } => min.max(10),
        }
    }

    pub fn instantiate<T: Scalar>(&self, n: Option<usize>) -> Result<Problem<T>, ProblemError> {
        let n = match (self.dimension, n) {
            (Dimension::Fixed(k), None) => k,
            (Dimension::Fixed(k), Some(r)) if r == k => k,
            (Dimension::Fixed(k), Some(r)) => {
                return Err(ProblemError::FixedDimension {
                    name: self.id.into(),
                    fixed: k,
                    requested: r,
                })
            }
            (Dimension::Scalable { .. }, None) => {
                return Err(ProblemError::DimensionRequired(self.id.into()))
            }
            (Dimension::Scalable { min }, Some(r)) if r < min => {
                return Err(ProblemError::DimensionTooSmall {
                    name: self.id.into(),
                    min,
                    requested: r,
                })
            }
            (Dimension::Scalable { .. }, Some(r)) => r,
        };
        let (objective, x0, f_star) = build::<T>(self.kind, n);
        let p = Problem::new(self.id, objective, x0, f_star, self.convexity);
        Ok(if self.is_scalable() { p.mark_scalable() } else { p })
    }

    pub fn record(&self) -> CatalogRecord {
        let (dimension, n_min, n_max) = match self.dimension {
            Dimension::Fixed(n) => ("fixed", n, Some(n)),
            Dimension::Scalable { min } => ("scalable", min, None),
        };
        let f_star = match self.kind {
            Kind::ChainedLq | Kind::ChainedCb3I | Kind::ChainedCb3II | Kind::ChainedMifflin2 => None,
            _ => {
                let n = self.default_test_dim();
                build::<f64>(self.kind, n).2
            }
        };
        CatalogRecord {
            name: self.id.into(),
            title: self.title.into(),
            dimension: dimension.into(),
            n_min,
            n_max,
            convexity: self.convexity,
            f_star,
            f_star_rule: self.f_star_rule.into(),
            x0_rule: self.x0_rule.into(),
            provenance: self.provenance.into(),
            suites: self.suites.iter().map(|s| s.to_string()).collect(),
        }
    }
}

const SMALL: &[&str] = &["small"];
const MEDIUM: &[&str] = &["medium"];
const LARGE: &[&str] = &["large"];
const MEDIUM_LARGE: &[&str] = &["medium", "large"];

static CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        id: "ql",
        title: "QL",
        dimension: Dimension::Fixed(2),
        convexity: Convexity::Convex,
        f_star_rule: "7.2 at (1.2, 2.4)",
        x0_rule: "(-1, 5)",
        provenance: "Lukšan-Vlček minimax collection; minimum verified analytically (projection of the origin onto x1 + 2 x2 = 6)",
        suites: SMALL,
        kind: Kind::Ql,
    },
    CatalogEntry {
        id: "wong1",
        title: "Wong1",
        dimension: Dimension::Fixed(7),
        convexity: Convexity::Convex,
        f_star_rule: "680.6300573",
        x0_rule: "(1, 2, 0, 4, 0, 1, 1)",
        provenance: "Lukšan-Vlček minimax collection (Hock-Schittkowski 100 as an exact-penalty minimax); literature value",
        suites: SMALL,
        kind: Kind::Wong1,
    },
    CatalogEntry {
        id: "wolfe",
        title: "Wolfe",
        dimension: Dimension::Fixed(2),
        convexity: Convexity::Convex,
        f_star_rule: "-8 at (-1, 0)",
        x0_rule: "(3, 2)",
        provenance: "Lukšan-Vlček collection; minimum verified analytically (9 x1 - x1^9 on x1 <= 0)",
        suites: SMALL,
        kind: Kind::Wolfe,
    },
    CatalogEntry {
        id: "spiral",
        title: "SPIRAL",
        dimension: Dimension::Fixed(2),
        convexity: Convexity::Convex,
        f_star_rule: "0 at the origin",
        x0_rule: "(1.411831, -4.79462)",
        provenance: "Lukšan-Vlček minimax collection; minimum verified analytically",
        suites: SMALL,
        kind: Kind::Spiral,
    },
    CatalogEntry {
        id: "rosenbrock_ns",
        title: "Nonsmooth Rosenbrock",
        dimension: Dimension::Fixed(2),
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at (1, 1)",
        x0_rule: "2e (minimizer is e)",
        provenance: "Lewis-Overton variant f = 8|x1^2 - x2| + (1 - x1)^2; the smooth-Rosenbrock reading was not used",
        suites: SMALL,
        kind: Kind::RosenbrockNs,
    },
    CatalogEntry {
        id: "crescent",
        title: "Crescent",
        dimension: Dimension::Fixed(2),
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at the origin",
        x0_rule: "(-1.5, 2)",
        provenance: "Kiwiel; minimum verified analytically",
        suites: SMALL,
        kind: Kind::Crescent,
    },
    CatalogEntry {
        id: "mifflin2",
        title: "Mifflin2",
        dimension: Dimension::Fixed(2),
        convexity: Convexity::Nonconvex,
        f_star_rule: "-1 at (1, 0)",
        x0_rule: "(-1, -1)",
        provenance: "Mäkelä-Neittaanmäki collection; minimum verified analytically",
        suites: SMALL,
        kind: Kind::Mifflin2,
    },
    CatalogEntry {
        id: "evd52",
        title: "EVD52",
        dimension: Dimension::Fixed(3),
        convexity: Convexity::Nonconvex,
        f_star_rule: "3.5997193",
        x0_rule: "(1, 1, 1)",
        provenance: "Lukšan-Vlček minimax collection; literature value, confirmed by long solver runs",
        suites: SMALL,
        kind: Kind::Evd52,
    },
    CatalogEntry {
        id: "hs78",
        title: "HS78",
        dimension: Dimension::Fixed(5),
        convexity: Convexity::Nonconvex,
        f_star_rule: "-2.9197004",
        x0_rule: "(-2, 1.5, 2, -1, -1)",
        provenance: "Lukšan-Vlček collection (Hock-Schittkowski 78 with exact L1 penalty, weight 10); literature value",
        suites: SMALL,
        kind: Kind::Hs78,
    },
    CatalogEntry {
        id: "l1hilb",
        title: "Generalization of L1HILB",
        dimension: Dimension::Scalable { min: 1 },
        convexity: Convexity::Convex,
        f_star_rule: "0 at the origin",
        x0_rule: "e",
        provenance: "Lukšan-Vlček; minimum verified analytically",
        suites: MEDIUM,
        kind: Kind::L1Hilb,
    },
    CatalogEntry {
        id: "mxhilb",
        title: "Generalization of MXHILB",
        dimension: Dimension::Scalable { min: 1 },
        convexity: Convexity::Convex,
        f_star_rule: "0 at the origin",
        x0_rule: "e",
        provenance: "Haarala-Miettinen-Mäkelä; minimum verified analytically",
        suites: MEDIUM,
        kind: Kind::MxHilb,
    },
    CatalogEntry {
        id: "chained_lq",
        title: "Chained LQ",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Convex,
        f_star_rule: "-(n-1) sqrt(2)",
        x0_rule: "-0.5 e",
        provenance: "Haarala-Miettinen-Mäkelä; each term is minimized at x_i = x_i+1 = 1/sqrt(2)",
        suites: MEDIUM_LARGE,
        kind: Kind::ChainedLq,
    },
    CatalogEntry {
        id: "chained_cb3_1",
        title: "Chained CB3 I",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Convex,
        f_star_rule: "2(n-1) at e",
        x0_rule: "2e",
        provenance: "Haarala-Miettinen-Mäkelä; literature value",
        suites: MEDIUM,
        kind: Kind::ChainedCb3I,
    },
    CatalogEntry {
        id: "chained_cb3_2",
        title: "Chained CB3 II",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Convex,
        f_star_rule: "2(n-1) at e",
        x0_rule: "2e",
        provenance: "Haarala-Miettinen-Mäkelä; literature value",
        suites: MEDIUM,
        kind: Kind::ChainedCb3II,
    },
    CatalogEntry {
        id: "active_faces",
        title: "Number of Active Faces",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at the origin",
        x0_rule: "e",
        provenance: "Haarala-Miettinen-Mäkelä; minimum verified analytically",
        suites: MEDIUM,
        kind: Kind::ActiveFaces,
    },
    CatalogEntry {
        id: "brown2",
        title: "Generalization of Brown Function 2",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at the origin",
        x0_rule: "x_i = -1 (i odd), 1 (i even)",
        provenance: "Haarala-Miettinen-Mäkelä; minimum verified analytically",
        suites: MEDIUM,
        kind: Kind::Brown2,
    },
    CatalogEntry {
        id: "chained_mifflin2",
        title: "Chained Mifflin 2",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Nonconvex,
        f_star_rule: "tabulated for n in {2, 10, 50, 100, 200, 500, 1000}; unknown otherwise",
        x0_rule: "-e",
        provenance: "Haarala-Miettinen-Mäkelä formula; minima from multistart SQP on a smooth epigraph reformulation, cross-checked against GS/GSI runs",
        suites: MEDIUM_LARGE,
        kind: Kind::ChainedMifflin2,
    },
    CatalogEntry {
        id: "chained_crescent_1",
        title: "Chained Crescent I",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at the origin",
        x0_rule: "x_i = -1.5 (i odd), 2 (i even)",
        provenance: "Haarala-Miettinen-Mäkelä; minimum verified analytically",
        suites: MEDIUM_LARGE,
        kind: Kind::ChainedCrescentI,
    },
    CatalogEntry {
        id: "chained_crescent_2",
        title: "Chained Crescent II",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at the origin",
        x0_rule: "x_i = -1.5 (i odd), 2 (i even)",
        provenance: "Haarala-Miettinen-Mäkelä; minimum verified analytically",
        suites: MEDIUM_LARGE,
        kind: Kind::ChainedCrescentII,
    },
    CatalogEntry {
        id: "maxq",
        title: "Generalization of MAXQ",
        dimension: Dimension::Scalable { min: 1 },
        convexity: Convexity::Convex,
        f_star_rule: "0 at the origin",
        x0_rule: "x_i = i (i <= n/2), -i (i > n/2)",
        provenance: "Haarala-Miettinen-Mäkelä; minimum verified analytically",
        suites: LARGE,
        kind: Kind::Maxq,
    },
    CatalogEntry {
        id: "tilted_norm",
        title: "Tilted Norm Function",
        dimension: Dimension::Scalable { min: 1 },
        convexity: Convexity::Convex,
        f_star_rule: "0 at the origin",
        x0_rule: "e",
        provenance: "Lewis-Overton form w|Ax| + (w-1) e1'Ax with w = 4 and A = I (their matrix is not reproduced)",
        suites: LARGE,
        kind: Kind::TiltedNorm,
    },
    CatalogEntry {
        id: "ncr1",
        title: "Nesterov's Chebyshev-Rosenbrock 1",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at e",
        x0_rule: "(-1, 1, ..., 1)",
        provenance: "Lewis-Overton / Gurbuzbalaban-Overton; minimum verified analytically",
        suites: LARGE,
        kind: Kind::Ncr1,
    },
    CatalogEntry {
        id: "ncr2",
        title: "Nesterov's Chebyshev-Rosenbrock 2",
        dimension: Dimension::Scalable { min: 2 },
        convexity: Convexity::Nonconvex,
        f_star_rule: "0 at e",
        x0_rule: "(-1, 1, ..., 1)",
        provenance: "Lewis-Overton / Gurbuzbalaban-Overton; minimum verified analytically",
        suites: LARGE,
        kind: Kind::Ncr2,
    },
];

/// Every registered problem, in a stable order.
pub fn catalog() -> &'static [CatalogEntry] {
    CATALOG
}

/// Known minima of Chained Mifflin 2 by dimension.
const CHAINED_MIFFLIN2_MINIMA: &[(usize, f64)] = &[
    (2, -1.0),
    (10, -6.5146142107),
    (50, -34.7951814095),
    (100, -70.1501877810),
    (200, -140.8607071702),
    (500, -352.9926485915),
    (1000, -706.5460085809),
];

type Built<T> = (Arc<dyn Objective<T>>, Vec<T>, Option<T>);

fn build<T: Scalar>(kind: Kind, n: usize) -> Built<T> {
    let alternating = |odd: f64, even: f64| -> Vec<T> {
        (0..n)
            .map(|i| if i % 2 == 0 { c(odd) } else { c(even) })
            .collect()
    };
    let nm1 = T::from_usize_lossy(n.saturating_sub(1));
    match kind {
        Kind::Ql => (Arc::new(Ql), vec![c(-1.0), c(5.0)], Some(c(7.2))),
        Kind::Wong1 => (
            Arc::new(Wong1),
            [1.0, 2.0, 0.0, 4.0, 0.0, 1.0, 1.0].iter().map(|&v| c(v)).collect(),
            Some(c(680.6300573)),
        ),
        Kind::Wolfe => (Arc::new(Wolfe), vec![c(3.0), c(2.0)], Some(c(-8.0))),
        Kind::Spiral => (Arc::new(Spiral), vec![c(1.411831), c(-4.79462)], Some(T::zero())),
        Kind::RosenbrockNs => (Arc::new(RosenbrockNs), vec![c(2.0), c(2.0)], Some(T::zero())),
        Kind::Crescent => (Arc::new(Crescent), vec![c(-1.5), c(2.0)], Some(T::zero())),
        Kind::Mifflin2 => (Arc::new(Mifflin2), vec![c(-1.0), c(-1.0)], Some(c(-1.0))),
        Kind::Evd52 => (Arc::new(Evd52), vec![T::one(); 3], Some(c(3.5997193))),
        Kind::Hs78 => (
            Arc::new(Hs78),
            [-2.0, 1.5, 2.0, -1.0, -1.0].iter().map(|&v| c(v)).collect(),
            Some(c(-2.9197004)),
        ),
        Kind::L1Hilb => (Arc::new(Hilbert { max: false }), vec![T::one(); n], Some(T::zero())),
        Kind::MxHilb => (Arc::new(Hilbert { max: true }), vec![T::one(); n], Some(T::zero())),
        Kind::ChainedLq => (
            Arc::new(ChainedLq),
            vec![c(-0.5); n],
            Some(-nm1 * c::<T>(2.0).sqrt()),
        ),
        Kind::ChainedCb3I => (Arc::new(ChainedCb3I), vec![c(2.0); n], Some(c::<T>(2.0) * nm1)),
        Kind::ChainedCb3II => (Arc::new(ChainedCb3II), vec![c(2.0); n], Some(c::<T>(2.0) * nm1)),
        Kind::ActiveFaces => (Arc::new(ActiveFaces), vec![T::one(); n], Some(T::zero())),
        Kind::Brown2 => (Arc::new(Brown2), alternating(-1.0, 1.0), Some(T::zero())),
        Kind::ChainedMifflin2 => (
            Arc::new(ChainedMifflin2),
            vec![-T::one(); n],
            CHAINED_MIFFLIN2_MINIMA
                .iter()
                .find(|(k, _)| *k == n)
                .map(|&(_, v)| c(v)),
        ),
        Kind::ChainedCrescentI => (Arc::new(ChainedCrescentI), alternating(-1.5, 2.0), Some(T::zero())),
        Kind::ChainedCrescentII => (Arc::new(ChainedCrescentII), alternating(-1.5, 2.0), Some(T::zero())),
        Kind::Maxq => {
            let half = n / 2;
            let x0 = (1..=n)
                .map(|i| {
                    let v = T::from_usize_lossy(i);
                    if i <= half {
                        v
                    } else {
                        -v
                    }
                })
                .collect();
            (Arc::new(Maxq), x0, Some(T::zero()))
        }
        Kind::TiltedNorm => (Arc::new(TiltedNorm), vec![T::one(); n], Some(T::zero())),
        Kind::Ncr1 | Kind::Ncr2 => {
            let mut x0 = vec![T::one(); n];
            x0[0] = -T::one();
            let obj: Arc<dyn Objective<T>> = if kind == Kind::Ncr1 {
                Arc::new(Ncr1)
            } else {
                Arc::new(Ncr2)
            };
            (obj, x0, Some(T::zero()))
        }
    }
}

// ---------------------------------------------------------------------------
// small problems

struct Ql;

impl Ql {
    fn pieces<T: Scalar>(x: &[T]) -> [T; 3] {
        let base = x[0] * x[0] + x[1] * x[1];
        let ten = c::<T>(10.0);
        [
            base,
            base + ten * (c::<T>(-4.0) * x[0] - x[1] + c(4.0)),
            base + ten * (-x[0] - c::<T>(2.0) * x[1] + c(6.0)),
        ]
    }
}

impl<T: Scalar> Objective<T> for Ql {
    fn value(&self, x: &[T]) -> T {
        let p = Self::pieces(x);
        p[argmax(&p).0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let two = c::<T>(2.0);
        out[0] = two * x[0];
        out[1] = two * x[1];
        match argmax(&Self::pieces(x)).0 {
            1 => {
                out[0] -= c(40.0);
                out[1] -= c(10.0);
            }
            2 => {
                out[0] -= c(10.0);
                out[1] -= c(20.0);
            }
            _ => {}
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        argmax(&Self::pieces(x)).1
    }
}

struct Wong1;

impl Wong1 {
    fn f1<T: Scalar>(x: &[T]) -> T {
        (x[0] - c(10.0)).powi(2)
            + c::<T>(5.0) * (x[1] - c(12.0)).powi(2)
            + x[2].powi(4)
            + c::<T>(3.0) * (x[3] - c(11.0)).powi(2)
            + c::<T>(10.0) * x[4].powi(6)
            + c::<T>(7.0) * x[5] * x[5]
            + x[6].powi(4)
            - c::<T>(4.0) * x[5] * x[6]
            - c::<T>(10.0) * x[5]
            - c::<T>(8.0) * x[6]
    }

    fn constraints<T: Scalar>(x: &[T]) -> [T; 4] {
        [
            c::<T>(2.0) * x[0] * x[0] + c::<T>(3.0) * x[1].powi(4) + x[2] + c::<T>(4.0) * x[3] * x[3]
                + c::<T>(5.0) * x[4]
                - c(127.0),
            c::<T>(7.0) * x[0] + c::<T>(3.0) * x[1] + c::<T>(10.0) * x[2] * x[2] + x[3] - x[4] - c(282.0),
            c::<T>(23.0) * x[0] + x[1] * x[1] + c::<T>(6.0) * x[5] * x[5] - c::<T>(8.0) * x[6] - c(196.0),
            c::<T>(4.0) * x[0] * x[0] + x[1] * x[1] - c::<T>(3.0) * x[0] * x[1]
                + c::<T>(2.0) * x[2] * x[2]
                + c::<T>(5.0) * x[5]
                - c::<T>(11.0) * x[6],
        ]
    }

    fn pieces<T: Scalar>(x: &[T]) -> [T; 5] {
        let f1 = Self::f1(x);
        let g = Self::constraints(x);
        let ten = c::<T>(10.0);
        [f1, f1 + ten * g[0], f1 + ten * g[1], f1 + ten * g[2], f1 + ten * g[3]]
    }
}

impl<T: Scalar> Objective<T> for Wong1 {
    fn value(&self, x: &[T]) -> T {
        let p = Self::pieces(x);
        p[argmax(&p).0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out[0] = c::<T>(2.0) * (x[0] - c(10.0));
        out[1] = c::<T>(10.0) * (x[1] - c(12.0));
        out[2] = c::<T>(4.0) * x[2].powi(3);
        out[3] = c::<T>(6.0) * (x[3] - c(11.0));
        out[4] = c::<T>(60.0) * x[4].powi(5);
        out[5] = c::<T>(14.0) * x[5] - c::<T>(4.0) * x[6] - c(10.0);
        out[6] = c::<T>(4.0) * x[6].powi(3) - c::<T>(4.0) * x[5] - c(8.0);
        let z = T::zero();
        let dg: [T; 7] = match argmax(&Self::pieces(x)).0 {
            0 => return,
            1 => [
                c::<T>(4.0) * x[0],
                c::<T>(12.0) * x[1].powi(3),
                T::one(),
                c::<T>(8.0) * x[3],
                c(5.0),
                z,
                z,
            ],
            2 => [c(7.0), c(3.0), c::<T>(20.0) * x[2], T::one(), -T::one(), z, z],
            3 => [c(23.0), c::<T>(2.0) * x[1], z, z, z, c::<T>(12.0) * x[5], c(-8.0)],
            _ => [
                c::<T>(8.0) * x[0] - c::<T>(3.0) * x[1],
                c::<T>(2.0) * x[1] - c::<T>(3.0) * x[0],
                c::<T>(4.0) * x[2],
                z,
                z,
                c(5.0),
                c(-11.0),
            ],
        };
        for (o, d) in out.iter_mut().zip(dg) {
            *o += c::<T>(10.0) * d;
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        argmax(&Self::pieces(x)).1
    }
}

struct Wolfe;

impl<T: Scalar> Objective<T> for Wolfe {
    fn value(&self, x: &[T]) -> T {
        let (x1, x2) = (x[0], x[1]);
        if x1 >= x2.abs() {
            c::<T>(5.0) * (c::<T>(9.0) * x1 * x1 + c::<T>(16.0) * x2 * x2).sqrt()
        } else if x1 > T::zero() {
            c::<T>(9.0) * x1 + c::<T>(16.0) * x2.abs()
        } else {
            c::<T>(9.0) * x1 + c::<T>(16.0) * x2.abs() - x1.powi(9)
        }
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let (x1, x2) = (x[0], x[1]);
        if x1 >= x2.abs() {
            let s = (c::<T>(9.0) * x1 * x1 + c::<T>(16.0) * x2 * x2).sqrt();
            out[0] = c::<T>(45.0) * x1 / s;
            out[1] = c::<T>(80.0) * x2 / s;
        } else if x1 > T::zero() {
            out[0] = c(9.0);
            out[1] = c::<T>(16.0) * sgn(x2);
        } else {
            out[0] = c::<T>(9.0) - c::<T>(9.0) * x1.powi(8);
            out[1] = c::<T>(16.0) * sgn(x2);
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        let (x1, x2) = (x[0], x[1]);
        (x1 > T::zero() && x1 == x2.abs()) || (x1 <= T::zero() && x2 == T::zero())
    }
}

struct Spiral;

impl Spiral {
    fn pieces<T: Scalar>(x: &[T]) -> [T; 2] {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let reg = c::<T>(0.005) * r * r;
        [
            (x[0] - r * r.cos()).powi(2) + reg,
            (x[1] - r * r.sin()).powi(2) + reg,
        ]
    }
}

impl<T: Scalar> Objective<T> for Spiral {
    fn value(&self, x: &[T]) -> T {
        let p = Self::pieces(x);
        p[argmax(&p).0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let r = (x[0] * x[0] + x[1] * x[1]).sqrt();
        let two = c::<T>(2.0);
        let reg = c::<T>(0.01);
        let (s, co) = (r.sin(), r.cos());
        if argmax(&Self::pieces(x)).0 == 0 {
            let a = x[0] - r * co;
            let k = (co - r * s) / r;
            out[0] = two * a * (T::one() - k * x[0]) + reg * x[0];
            out[1] = -two * a * k * x[1] + reg * x[1];
        } else {
            let b = x[1] - r * s;
            let k = (s + r * co) / r;
            out[0] = -two * b * k * x[0] + reg * x[0];
            out[1] = two * b * (T::one() - k * x[1]) + reg * x[1];
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        (x[0] == T::zero() && x[1] == T::zero()) || argmax(&Self::pieces(x)).1
    }
}

struct RosenbrockNs;

impl<T: Scalar> Objective<T> for RosenbrockNs {
    fn value(&self, x: &[T]) -> T {
        c::<T>(8.0) * (x[0] * x[0] - x[1]).abs() + (T::one() - x[0]).powi(2)
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let s = sgn(x[0] * x[0] - x[1]);
        out[0] = c::<T>(16.0) * s * x[0] - c::<T>(2.0) * (T::one() - x[0]);
        out[1] = c::<T>(-8.0) * s;
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x[0] * x[0] == x[1]
    }
}

struct Crescent;

impl Crescent {
    fn pieces<T: Scalar>(x1: T, x2: T) -> [T; 2] {
        let q = x1 * x1 + (x2 - T::one()).powi(2);
        [q + x2 - T::one(), -q + x2 + T::one()]
    }
}

impl<T: Scalar> Objective<T> for Crescent {
    fn value(&self, x: &[T]) -> T {
        let p = Self::pieces(x[0], x[1]);
        p[argmax(&p).0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let two = c::<T>(2.0);
        let s = if argmax(&Self::pieces(x[0], x[1])).0 == 0 {
            T::one()
        } else {
            -T::one()
        };
        out[0] = s * two * x[0];
        out[1] = s * two * (x[1] - T::one()) + T::one();
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        argmax(&Self::pieces(x[0], x[1])).1
    }
}

struct Mifflin2;

impl<T: Scalar> Objective<T> for Mifflin2 {
    fn value(&self, x: &[T]) -> T {
        let r = x[0] * x[0] + x[1] * x[1] - T::one();
        -x[0] + c::<T>(2.0) * r + c::<T>(1.75) * r.abs()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let r = x[0] * x[0] + x[1] * x[1] - T::one();
        let k = c::<T>(4.0) + c::<T>(3.5) * sgn(r);
        out[0] = -T::one() + k * x[0];
        out[1] = k * x[1];
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x[0] * x[0] + x[1] * x[1] - T::one() == T::zero()
    }
}

struct Evd52;

impl Evd52 {
    fn pieces<T: Scalar>(x: &[T]) -> [T; 6] {
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let one = T::one();
        let two = c::<T>(2.0);
        let w = c::<T>(5.0) * x3 - x1 + one;
        [
            x1 * x1 + x2 * x2 + x3 * x3 - one,
            x1 * x1 + x2 * x2 + (x3 - two).powi(2),
            x1 + x2 + x3 - one,
            x1 + x2 - x3 + one,
            two * x1.powi(3) + c::<T>(6.0) * x2 * x2 + two * w * w,
            x1 * x1 - c::<T>(9.0) * x3,
        ]
    }
}

impl<T: Scalar> Objective<T> for Evd52 {
    fn value(&self, x: &[T]) -> T {
        let p = Self::pieces(x);
        p[argmax(&p).0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let one = T::one();
        let two = c::<T>(2.0);
        let g: [T; 3] = match argmax(&Self::pieces(x)).0 {
            0 => [two * x1, two * x2, two * x3],
            1 => [two * x1, two * x2, two * (x3 - two)],
            2 => [one, one, one],
            3 => [one, one, -one],
            4 => {
                let w = c::<T>(5.0) * x3 - x1 + one;
                [
                    c::<T>(6.0) * x1 * x1 - c::<T>(4.0) * w,
                    c::<T>(12.0) * x2,
                    c::<T>(20.0) * w,
                ]
            }
            _ => [two * x1, T::zero(), c(-9.0)],
        };
        out.copy_from_slice(&g);
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        argmax(&Self::pieces(x)).1
    }
}

struct Hs78;

impl Hs78 {
    fn residuals<T: Scalar>(x: &[T]) -> [T; 3] {
        [
            x.iter().map(|&v| v * v).sum::<T>() - c(10.0),
            x[1] * x[2] - c::<T>(5.0) * x[3] * x[4],
            x[0].powi(3) + x[1].powi(3) + T::one(),
        ]
    }
}

impl<T: Scalar> Objective<T> for Hs78 {
    fn value(&self, x: &[T]) -> T {
        let prod = x.iter().fold(T::one(), |a, &v| a * v);
        prod + c::<T>(10.0) * Self::residuals(x).iter().map(|r| r.abs()).sum::<T>()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        for i in 0..5 {
            out[i] = (0..5)
                .filter(|&j| j != i)
                .fold(T::one(), |a, j| a * x[j]);
        }
        let r = Self::residuals(x);
        let ten = c::<T>(10.0);
        let two = c::<T>(2.0);
        let three = c::<T>(3.0);
        let five = c::<T>(5.0);
        let s0 = ten * sgn(r[0]);
        for i in 0..5 {
            out[i] += s0 * two * x[i];
        }
        let s1 = ten * sgn(r[1]);
        out[1] += s1 * x[2];
        out[2] += s1 * x[1];
        out[3] -= s1 * five * x[4];
        out[4] -= s1 * five * x[3];
        let s2 = ten * sgn(r[2]);
        out[0] += s2 * three * x[0] * x[0];
        out[1] += s2 * three * x[1] * x[1];
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        Self::residuals(x).iter().any(|r| *r == T::zero())
    }
}

// ---------------------------------------------------------------------------
// scalable problems

/// `v_i = sum_j x_j / (i + j - 1)`; L1HILB sums `|v_i|`, MXHILB takes the max.
struct Hilbert {
    max: bool,
}

impl Hilbert {
    fn rows<T: Scalar>(x: &[T]) -> Vec<T> {
        let n = x.len();
        (0..n)
            .map(|i| {
                x.iter()
                    .enumerate()
                    .map(|(j, &xj)| xj / T::from_usize_lossy(i + j + 1))
                    .sum()
            })
            .collect()
    }
}

impl<T: Scalar> Objective<T> for Hilbert {
    fn value(&self, x: &[T]) -> T {
        let v = Self::rows(x);
        if self.max {
            v.iter().fold(T::zero(), |a, r| a.max(r.abs()))
        } else {
            v.iter().map(|r| r.abs()).sum()
        }
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let n = x.len();
        let v = Self::rows(x);
        out.iter_mut().for_each(|o| *o = T::zero());
        let abs: Vec<T> = v.iter().map(|r| r.abs()).collect();
        let active: Vec<usize> = if self.max {
            vec![argmax(&abs).0]
        } else {
            (0..n).collect()
        };
        for i in active {
            let s = sgn(v[i]);
            for (j, o) in out.iter_mut().enumerate() {
                *o += s / T::from_usize_lossy(i + j + 1);
            }
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        let v = Self::rows(x);
        if self.max {
            let abs: Vec<T> = v.iter().map(|r| r.abs()).collect();
            let (i, tie) = argmax(&abs);
            tie || abs[i] == T::zero()
        } else {
            v.iter().any(|r| *r == T::zero())
        }
    }
}

/// `sum_i max(-x_i - x_i+1, -x_i - x_i+1 + x_i^2 + x_i+1^2 - 1)`
struct ChainedLq;

impl<T: Scalar> Objective<T> for ChainedLq {
    fn value(&self, x: &[T]) -> T {
        x.windows(2)
            .map(|w| {
                let a = -w[0] - w[1];
                a.max(a + w[0] * w[0] + w[1] * w[1] - T::one())
            })
            .sum()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        let two = c::<T>(2.0);
        for i in 0..x.len() - 1 {
            let (a, b) = (x[i], x[i + 1]);
            out[i] -= T::one();
            out[i + 1] -= T::one();
            if a * a + b * b - T::one() > T::zero() {
                out[i] += two * a;
                out[i + 1] += two * b;
            }
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x.windows(2)
            .any(|w| w[0] * w[0] + w[1] * w[1] - T::one() == T::zero())
    }
}

fn cb3_pieces<T: Scalar>(a: T, b: T) -> [T; 3] {
    let two = c::<T>(2.0);
    [
        a.powi(4) + b * b,
        (two - a).powi(2) + (two - b).powi(2),
        two * (b - a).exp(),
    ]
}

fn cb3_piece_grad<T: Scalar>(k: usize, a: T, b: T) -> (T, T) {
    let two = c::<T>(2.0);
    match k {
        0 => (c::<T>(4.0) * a.powi(3), two * b),
        1 => (-two * (two - a), -two * (two - b)),
        _ => {
            let e = two * (b - a).exp();
            (-e, e)
        }
    }
}

/// `sum_i max(x_i^4 + x_i+1^2, (2 - x_i)^2 + (2 - x_i+1)^2, 2 exp(x_i+1 - x_i))`
struct ChainedCb3I;

impl<T: Scalar> Objective<T> for ChainedCb3I {
    fn value(&self, x: &[T]) -> T {
        x.windows(2)
            .map(|w| {
                let p = cb3_pieces(w[0], w[1]);
                p[argmax(&p).0]
            })
            .sum()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for i in 0..x.len() - 1 {
            let k = argmax(&cb3_pieces(x[i], x[i + 1])).0;
            let (ga, gb) = cb3_piece_grad(k, x[i], x[i + 1]);
            out[i] += ga;
            out[i + 1] += gb;
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x.windows(2).any(|w| argmax(&cb3_pieces(w[0], w[1])).1)
    }
}

/// Max over the three CB3 pieces, each summed along the chain.
struct ChainedCb3II;

impl ChainedCb3II {
    fn sums<T: Scalar>(x: &[T]) -> [T; 3] {
        let mut s = [T::zero(); 3];
        for w in x.windows(2) {
            let p = cb3_pieces(w[0], w[1]);
            for k in 0..3 {
                s[k] += p[k];
            }
        }
        s
    }
}

impl<T: Scalar> Objective<T> for ChainedCb3II {
    fn value(&self, x: &[T]) -> T {
        let s = Self::sums(x);
        s[argmax(&s).0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        let k = argmax(&Self::sums(x)).0;
        for i in 0..x.len() - 1 {
            let (ga, gb) = cb3_piece_grad(k, x[i], x[i + 1]);
            out[i] += ga;
            out[i + 1] += gb;
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        argmax(&Self::sums(x)).1
    }
}

/// `max_i max(g(-sum_j x_j), g(x_i))`, `g(y) = ln(|y| + 1)`.
///
/// `g` is increasing in `|y|`, so the active piece is the largest of
/// `|sum_j x_j|` and the `|x_i|`.
struct ActiveFaces;

impl ActiveFaces {
    fn args<T: Scalar>(x: &[T]) -> Vec<T> {
        let s: T = x.iter().copied().sum();
        std::iter::once(-s).chain(x.iter().copied()).collect()
    }
}

impl<T: Scalar> Objective<T> for ActiveFaces {
    fn value(&self, x: &[T]) -> T {
        let m = Self::args(x).iter().fold(T::zero(), |a, v| a.max(v.abs()));
        (m + T::one()).ln()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let args = Self::args(x);
        let abs: Vec<T> = args.iter().map(|v| v.abs()).collect();
        let k = argmax(&abs).0;
        let dg = sgn(args[k]) / (abs[k] + T::one());
        if k == 0 {
            out.iter_mut().for_each(|o| *o = -dg);
        } else {
            out.iter_mut().for_each(|o| *o = T::zero());
            out[k - 1] = dg;
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        let args = Self::args(x);
        let abs: Vec<T> = args.iter().map(|v| v.abs()).collect();
        let (k, tie) = argmax(&abs);
        tie || args[k] == T::zero()
    }
}

/// `sum_i |x_i|^(x_i+1^2 + 1) + |x_i+1|^(x_i^2 + 1)`
struct Brown2;

/// `|a|^(b^2 + 1)` and its partial derivatives in `a` and `b`.
fn brown_term<T: Scalar>(a: T, b: T) -> (T, T, T) {
    let p = b * b + T::one();
    let abs = a.abs();
    if abs == T::zero() {
        return (T::zero(), T::zero(), T::zero());
    }
    let v = abs.powf(p);
    let da = p * sgn(a) * abs.powf(p - T::one());
    let db = v * abs.ln() * c::<T>(2.0) * b;
    (v, da, db)
}

impl<T: Scalar> Objective<T> for Brown2 {
    fn value(&self, x: &[T]) -> T {
        x.windows(2)
            .map(|w| brown_term(w[0], w[1]).0 + brown_term(w[1], w[0]).0)
            .sum()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for i in 0..x.len() - 1 {
            let (_, da, db) = brown_term(x[i], x[i + 1]);
            out[i] += da;
            out[i + 1] += db;
            let (_, da, db) = brown_term(x[i + 1], x[i]);
            out[i + 1] += da;
            out[i] += db;
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x.iter().any(|v| *v == T::zero())
    }
}

/// `sum_i -x_i + 2(x_i^2 + x_i+1^2 - 1) + 1.75 |x_i^2 + x_i+1^2 - 1|`
struct ChainedMifflin2;

impl<T: Scalar> Objective<T> for ChainedMifflin2 {
    fn value(&self, x: &[T]) -> T {
        x.windows(2)
            .map(|w| {
                let r = w[0] * w[0] + w[1] * w[1] - T::one();
                -w[0] + c::<T>(2.0) * r + c::<T>(1.75) * r.abs()
            })
            .sum()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for i in 0..x.len() - 1 {
            let r = x[i] * x[i] + x[i + 1] * x[i + 1] - T::one();
            let k = c::<T>(4.0) + c::<T>(3.5) * sgn(r);
            out[i] += k * x[i] - T::one();
            out[i + 1] += k * x[i + 1];
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x.windows(2)
            .any(|w| w[0] * w[0] + w[1] * w[1] - T::one() == T::zero())
    }
}

fn crescent_grad<T: Scalar>(upper: bool, a: T, b: T) -> (T, T) {
    let two = c::<T>(2.0);
    if upper {
        (two * a, two * (b - T::one()) + T::one())
    } else {
        (-two * a, -two * (b - T::one()) + T::one())
    }
}

/// Max of the two crescent pieces, each summed along the chain.
struct ChainedCrescentI;

impl ChainedCrescentI {
    fn sums<T: Scalar>(x: &[T]) -> [T; 2] {
        let mut s = [T::zero(); 2];
        for w in x.windows(2) {
            let p = Crescent::pieces(w[0], w[1]);
            s[0] += p[0];
            s[1] += p[1];
        }
        s
    }
}

impl<T: Scalar> Objective<T> for ChainedCrescentI {
    fn value(&self, x: &[T]) -> T {
        let s = Self::sums(x);
        s[argmax(&s).0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        let upper = argmax(&Self::sums(x)).0 == 0;
        for i in 0..x.len() - 1 {
            let (ga, gb) = crescent_grad(upper, x[i], x[i + 1]);
            out[i] += ga;
            out[i + 1] += gb;
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        argmax(&Self::sums(x)).1
    }
}

/// Chain sum of the termwise crescent max.
struct ChainedCrescentII;

impl<T: Scalar> Objective<T> for ChainedCrescentII {
    fn value(&self, x: &[T]) -> T {
        x.windows(2)
            .map(|w| {
                let p = Crescent::pieces(w[0], w[1]);
                p[0].max(p[1])
            })
            .sum()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        out.iter_mut().for_each(|o| *o = T::zero());
        for i in 0..x.len() - 1 {
            let upper = argmax(&Crescent::pieces(x[i], x[i + 1])).0 == 0;
            let (ga, gb) = crescent_grad(upper, x[i], x[i + 1]);
            out[i] += ga;
            out[i + 1] += gb;
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x.windows(2)
            .any(|w| argmax(&Crescent::pieces(w[0], w[1])).1)
    }
}

/// `max_i x_i^2`
struct Maxq;

impl<T: Scalar> Objective<T> for Maxq {
    fn value(&self, x: &[T]) -> T {
        x.iter().fold(T::zero(), |a, &v| a.max(v * v))
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let sq: Vec<T> = x.iter().map(|&v| v * v).collect();
        let k = argmax(&sq).0;
        out.iter_mut().for_each(|o| *o = T::zero());
        out[k] = c::<T>(2.0) * x[k];
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        let sq: Vec<T> = x.iter().map(|&v| v * v).collect();
        argmax(&sq).1
    }
}

/// `4 |x| + 3 x_1`
struct TiltedNorm;

impl<T: Scalar> Objective<T> for TiltedNorm {
    fn value(&self, x: &[T]) -> T {
        let norm = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        c::<T>(4.0) * norm + c::<T>(3.0) * x[0]
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let norm = x.iter().map(|&v| v * v).sum::<T>().sqrt();
        for (o, &v) in out.iter_mut().zip(x) {
            *o = c::<T>(4.0) * v / norm;
        }
        out[0] += c(3.0);
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        x.iter().all(|v| *v == T::zero())
    }
}

/// `(x_1 - 1)^2 / 4 + sum_i |x_i+1 - 2 x_i^2 + 1|`
struct Ncr1;

impl<T: Scalar> Objective<T> for Ncr1 {
    fn value(&self, x: &[T]) -> T {
        let two = c::<T>(2.0);
        c::<T>(0.25) * (x[0] - T::one()).powi(2)
            + x.windows(2)
                .map(|w| (w[1] - two * w[0] * w[0] + T::one()).abs())
                .sum::<T>()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let two = c::<T>(2.0);
        out.iter_mut().for_each(|o| *o = T::zero());
        out[0] = c::<T>(0.5) * (x[0] - T::one());
        for i in 0..x.len() - 1 {
            let s = sgn(x[i + 1] - two * x[i] * x[i] + T::one());
            out[i + 1] += s;
            out[i] -= s * c::<T>(4.0) * x[i];
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        let two = c::<T>(2.0);
        x.windows(2)
            .any(|w| w[1] - two * w[0] * w[0] + T::one() == T::zero())
    }
}

/// `|x_1 - 1| / 4 + sum_i |x_i+1 - 2 |x_i| + 1|`
struct Ncr2;

impl<T: Scalar> Objective<T> for Ncr2 {
    fn value(&self, x: &[T]) -> T {
        let two = c::<T>(2.0);
        c::<T>(0.25) * (x[0] - T::one()).abs()
            + x.windows(2)
                .map(|w| (w[1] - two * w[0].abs() + T::one()).abs())
                .sum::<T>()
    }

    fn gradient(&self, x: &[T], out: &mut [T]) {
        let two = c::<T>(2.0);
        out.iter_mut().for_each(|o| *o = T::zero());
        out[0] = c::<T>(0.25) * sgn(x[0] - T::one());
        for i in 0..x.len() - 1 {
            let s = sgn(x[i + 1] - two * x[i].abs() + T::one());
            out[i + 1] += s;
            out[i] -= s * two * sgn(x[i]);
        }
    }

    fn is_nondifferentiable(&self, x: &[T]) -> bool {
        let two = c::<T>(2.0);
        x[0] == T::one()
            || x.windows(2).any(|w| {
                w[0] == T::zero() || w[1] - two * w[0].abs() + T::one() == T::zero()
            })
    }
}
