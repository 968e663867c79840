//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs as a plain binary (`harness = false`) and exits nonzero when any
//! criterion fails.

mod common;

use std::time::Instant;

use common::{abs_sum, columns, fd_check, hull_min_norm, instances, median, random_matrix};
use gradsamp::bench::{
    default_config, emit_reports, profile_from_rows, read_profile_csv, read_results_csv, run_one, start_point, suite_problems, Metric,
    RunRecord,
};
use gradsamp::scalar::vec;
use gradsamp::solver::{descent_slacks, serious_iteration_bound};
use gradsamp::{
    get_problem, ideal_direction, ideal_vector, min_norm_qp, run, sample_ball, Config, GradientMatrix, Method, Problem, RngStream,
    RunOutput, Scale, StoppingRule,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Traces collected from every solver run, for the descent check.
#[derive(Default)]
struct Traces {
    runs: Vec<(String, RunOutput<f64>, f64)>,
}

impl Traces {
    fn solve(&mut self, label: &str, p: &Problem, start: &[f64], config: &Config, rule: Option<&StoppingRule<f64>>) -> RunOutput<f64> {
        let out = run(p, start, config, &mut RngStream::new(config.seed), rule).unwrap();
        self.runs.push((label.to_string(), out.clone(), config.c));
        out
    }
}

fn qp_oracle() -> Outcome {
    let mut rng = RngStream::new(101);
    let mut worst: f64 = 0.0;
    for case in 0..500 {
        let n = 1 + case % 4;
        let k = 1 + (case / 4) % 5;
        let m = random_matrix(&mut rng, n, k);
        let got = min_norm_qp(&m, 1e-10).unwrap().g_norm();
        worst = worst.max((got - hull_min_norm(&columns(&m))).abs());
    }
    outcome(worst <= 1e-8, format!("500 bundles, max |norm - oracle| = {worst:.2e} (tol 1e-8)"))
}

fn ideal_norm_bound() -> Outcome {
    let mut rng = RngStream::new(202);
    let mut worst = f64::NEG_INFINITY;
    let mut zero_ok = true;
    for _ in 0..1000 {
        let n = 1 + (rng.uniform() * 50.0) as usize;
        let m = (rng.uniform() * (2 * n + 1) as f64) as usize;
        let mat = random_matrix(&mut rng, n, m + 1);
        let gi = vec::norm(&ideal_vector(&mat));
        let gs = min_norm_qp(&mat, 1e-10).unwrap().g_norm();
        worst = worst.max(gi - gs);
        let mut cols = columns(&mat);
        let at = (rng.uniform() * (cols.len() + 1) as f64) as usize;
        cols.insert(at.min(cols.len()), vec![0.0; n]);
        zero_ok &= ideal_vector(&GradientMatrix::from_columns(&cols)).iter().all(|&v| v == 0.0);
    }
    outcome(
        worst <= 1e-9 && zero_ok,
        format!("1000 bundles, max |gI| - |gs| = {worst:.2e} (tol 1e-9), zero column gives gI = 0: {zero_ok}"),
    )
}

fn quadratic_descent() -> Outcome {
    let mut rng = RngStream::new(303);
    let mut worst = f64::NEG_INFINITY;
    let mut checked = 0;
    while checked < 200 {
        let n = 2 + (rng.uniform() * 9.0) as usize;
        let b_mat: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.standard_normal()).collect()).collect();
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| b_mat[k][i] * b_mat[k][j]).sum::<f64>() + if i == j { 1.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        let b: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let grad = |x: &[f64]| -> Vec<f64> { (0..n).map(|i| vec::dot(&a[i], x) + b[i]).collect() };
        let x: Vec<f64> = (0..n).map(|_| rng.standard_normal()).collect();
        let eps = 10f64.powf(-3.0 * rng.uniform());
        let mut cols = vec![grad(&x)];
        for _ in 0..2 * n {
            cols.push(grad(&sample_ball(&mut rng, &x, eps)));
        }
        let r = ideal_direction(&GradientMatrix::from_columns(&cols));
        let Some(d) = &r.d else { continue };
        worst = worst.max(vec::dot(&cols[0], d) + r.g_norm());
        checked += 1;
    }
    outcome(worst <= 1e-9, format!("200 quadratics, max grad.d + |gI| = {worst:.2e} (tol 1e-9)"))
}

fn gradients() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut name = String::new();
    let all = instances();
    for p in &all {
        let e = fd_check(p, 100);
        if e > worst {
            worst = e;
            name = p.label();
        }
    }
    outcome(
        worst < 1e-5,
        format!("{} instances x 100 points, worst relative error {worst:.2e} on {name} (tol 1e-5)", all.len()),
    )
}

const SMALL_CORE: [&str; 5] = ["ql", "wolfe", "crescent", "mifflin2", "rosenbrock_ns"];

fn small_runs(traces: &mut Traces, name: &str, method: Method) -> Vec<RunOutput<f64>> {
    let p = get_problem::<f64>(name, None).unwrap();
    let rule = StoppingRule::new(p.f_star().unwrap(), 5e-4);
    (0..5)
        .map(|seed| {
            let config = default_config(&p, Scale::Small).with_method(method).with_seed(seed);
            traces.solve(name, &p, &start_point(&p, seed), &config, Some(&rule))
        })
        .collect()
}

fn small_convergence(traces: &mut Traces) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in SMALL_CORE {
        let wins = small_runs(traces, name, Method::Gsi)
            .iter()
            .filter(|o| o.report.success && o.report.iters <= 2000)
            .count();
        pass &= wins >= 4;
        parts.push(format!("{name} {wins}/5"));
    }
    outcome(pass, format!("GSI successes at tol 5e-4: {} (need >= 4/5)", parts.join(", ")))
}

fn qp_avoidance(traces: &mut Traces) -> Outcome {
    let mut parts = Vec::new();
    let mut pass = true;
    for name in ["mifflin2", "wolfe"] {
        let m = median(small_runs(traces, name, Method::Gsi).iter().map(|o| o.report.pii).collect());
        pass &= m >= 0.6;
        parts.push(format!("{name} {m:.2}"));
    }
    // every run of every small-suite problem
    let mut all = Vec::new();
    for p in suite_problems(Scale::Small, &[]).unwrap() {
        let rule = StoppingRule::for_problem(&p);
        for seed in 0..5 {
            let config = default_config(&p, Scale::Small).with_seed(seed);
            all.push(traces.solve(&p.label(), &p, &start_point(&p, seed), &config, rule.as_ref()).report.pii);
        }
    }
    let runs = all.len();
    let agg = median(all);
    pass &= agg >= 0.6;
    outcome(
        pass,
        format!("median PII {}, small suite ({runs} runs) {agg:.2} (need >= 0.6)", parts.join(", ")),
    )
}

fn qp_economy(traces: &mut Traces) -> Outcome {
    let mut parts = Vec::new();
    let mut wins = 0;
    let mut pairs = 0;
    for name in ["chained_lq", "chained_crescent_2", "maxq"] {
        let p = get_problem::<f64>(name, Some(100)).unwrap();
        let rule = StoppingRule::new(p.f_star().unwrap(), Scale::Medium.target_tol());
        let mut local = 0;
        for seed in 0..5 {
            let start = start_point(&p, seed);
            let count = |traces: &mut Traces, method| {
                let config = default_config(&p, Scale::Medium).with_method(method).with_seed(seed);
                traces.solve(name, &p, &start, &config, Some(&rule)).report.qp_count
            };
            let gs = count(traces, Method::Gs);
            let gsi = count(traces, Method::Gsi);
            local += (gsi < gs) as usize;
            pairs += 1;
        }
        wins += local;
        parts.push(format!("{name} {local}/5"));
    }
    let frac = wins as f64 / pairs as f64;
    outcome(
        frac >= 0.8,
        format!("GSI qp_count < GS at n = 100: {} ({:.0}% of pairs, need >= 80%)", parts.join(", "), 100.0 * frac),
    )
}

fn serious_bound(traces: &mut Traces) -> Outcome {
    let p = abs_sum();
    let f0 = p.evaluate(p.x0()).unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    // eps = 6 puts the threshold at gamma eps / 3 = 1; eps = 3 halves it
    for (eps, want) in [(6.0, 501), (3.0, 1001)] {
        let mut config = Config::for_dimension(2).fixed_tolerance_regime(0.1, eps);
        config.c = 0.1;
        config.f_l = Some(0.0);
        config.max_iters = 5000;
        let bound = serious_iteration_bound(&config, f0).unwrap();
        pass &= bound == want;
        let mut most = 0;
        for seed in 0..5 {
            let out = traces.solve("abs_sum", &p, p.x0(), &config.clone().with_seed(seed), None);
            most = most.max(out.report.serious_count as u64);
        }
        pass &= most <= bound;
        parts.push(format!("eps {eps}: max serious {most} <= bound {bound}"));
    }
    outcome(pass, format!("LBALS, nu = 0.1, c = 0.1, 5 seeds: {}", parts.join("; ")))
}

fn determinism(traces: &mut Traces) -> Outcome {
    let mut same = true;
    for name in ["crescent", "mifflin2", "wolfe"] {
        let p = get_problem::<f64>(name, None).unwrap();
        let rule = StoppingRule::for_problem(&p);
        for method in [Method::Gs, Method::Gsi] {
            let config = default_config(&p, Scale::Small).with_method(method).with_seed(7);
            let start = start_point(&p, 7);
            let a = traces.solve(name, &p, &start, &config, rule.as_ref());
            let b = traces.solve(name, &p, &start, &config, rule.as_ref());
            same &= a.trace == b.trace && a.report.final_x == b.report.final_x;
        }
    }

    let records: Vec<RunRecord> = SMALL_CORE
        .iter()
        .flat_map(|name| {
            let p = get_problem::<f64>(name, None).unwrap();
            (0..3u64)
                .flat_map(|seed| [Method::Gs, Method::Gsi].map(|m| (m, seed)))
                .map(|(m, seed)| run_one(&p, default_config(&p, Scale::Small).with_method(m).with_seed(seed), Scale::Small))
                .collect::<Vec<_>>()
        })
        .collect();
    let dir = tempfile::tempdir().unwrap();
    let metrics = [Metric::QpCount, Metric::FEval, Metric::CpuTime];
    let files = emit_reports(dir.path(), &records, &metrics).unwrap();
    let rows = read_results_csv(&files.results_csv).unwrap();
    let mut exact = files.profile_csv.len() == metrics.len();
    for (metric, path) in metrics.iter().zip(&files.profile_csv) {
        let table = profile_from_rows(&rows, *metric).unwrap();
        let (solvers, taus, rho) = read_profile_csv(path).unwrap();
        exact &= solvers == table.solvers && taus == table.taus;
        exact &= table.curves.iter().zip(&rho).all(|(c, r)| &c.rho == r);
    }
    outcome(
        same && exact,
        format!("repeated runs give identical traces: {same}; profile CSV reproduces the emitted curves exactly: {exact}"),
    )
}

fn descent(traces: &Traces) -> Outcome {
    let mut worst = f64::INFINITY;
    let mut iters = 0;
    for (_, out, c) in &traces.runs {
        for s in descent_slacks(out, *c) {
            worst = worst.min(s);
            iters += 1;
        }
    }
    outcome(
        worst >= -1e-12,
        format!("{} runs, {iters} iterations, min slack {worst:.2e} (tol -1e-12)", traces.runs.len()),
    )
}

fn main() {
    let mut traces = Traces::default();
    let mut results: Vec<(usize, Outcome, f64)> = Vec::new();
    let mut time = |id: usize, f: &mut dyn FnMut() -> Outcome| {
        let clock = Instant::now();
        let o = f();
        results.push((id, o, clock.elapsed().as_secs_f64()));
    };
    time(1, &mut qp_oracle);
    time(2, &mut ideal_norm_bound);
    time(3, &mut quadratic_descent);
    time(5, &mut gradients);
    time(6, &mut || small_convergence(&mut traces));
    time(7, &mut || qp_avoidance(&mut traces));
    time(8, &mut || qp_economy(&mut traces));
    time(9, &mut || serious_bound(&mut traces));
    time(10, &mut || determinism(&mut traces));
    time(4, &mut || descent(&traces));
    results.sort_by_key(|r| r.0);

    let mut failed = 0;
    for (id, o, secs) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += !o.pass as usize;
        println!("criterion {id:>2}: {tag}  {} [{secs:.1} s]", o.detail);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
