mod common;

use common::{abs_sum, half_square, median};
use gradsamp::bench::{default_config, start_point};
use gradsamp::scalar::vec;
use gradsamp::solver::{descent_slacks, read_trace_jsonl, serious_iteration_bound, write_trace_jsonl};
use gradsamp::{
    get_problem, run, Config, DirectionKind, LineSearchMode, Method, NullReason, Problem, RngStream, RunOutput, Scale,
    StopReason, StoppingRule,
};

fn solve(p: &Problem, start: &[f64], config: &Config, seed: u64, rule: Option<&StoppingRule<f64>>) -> RunOutput<f64> {
    run(p, start, &config.clone().with_seed(seed), &mut RngStream::new(seed), rule).unwrap()
}

/// Trace-level invariants that hold for every run.
fn check_invariants(out: &RunOutput<f64>, config: &Config) {
    let r = &out.report;
    let t = &out.trace;
    assert_eq!(r.iters, t.len());
    assert!((0.0..=1.0).contains(&r.pii));
    assert!(r.qp_count <= r.iters);
    assert_eq!(r.qp_count, t.iter().filter(|x| x.qp_solved).count());
    assert_eq!(r.serious_count, t.iter().filter(|x| x.serious).count());
    let directional: Vec<_> = t
        .iter()
        .filter(|x| x.null_reason != Some(NullReason::StationarityShrink))
        .collect();
    assert_eq!(r.direction_iters, directional.len());
    assert_eq!(r.nii, directional.iter().filter(|x| !x.qp_solved).count());
    if config.line_search == LineSearchMode::Bals {
        assert!(r.f_eval > r.direction_iters);
    }
    assert!(r.qp_time <= r.wall_time);

    for (i, rec) in t.iter().enumerate() {
        // dispatch
        match config.method {
            Method::Gs => {
                assert!(rec.qp_solved);
                assert!(rec.ideal_norm.is_none());
            }
            Method::Gsi => assert_eq!(rec.qp_solved, rec.ideal_norm.unwrap() <= rec.nu, "k = {}", rec.k),
        }
        if rec.direction_kind.is_some() && !rec.qp_solved {
            assert_eq!(rec.direction_kind, Some(DirectionKind::Ideal));
        }
        // monotonicity and descent
        assert!(rec.f_next <= rec.f_x);
        if rec.serious {
            assert!(rec.f_next < rec.f_x);
            assert!(rec.t > 0.0);
        } else {
            assert!(rec.null_reason.is_some() || rec.t > 0.0);
        }
        // schedules
        let (nu_next, eps_next) = match t.get(i + 1) {
            Some(n) => (n.nu, n.eps),
            None => (r.final_nu, r.final_eps),
        };
        let x_next = t.get(i + 1).map_or(&r.final_x, |n| &n.x);
        match rec.null_reason {
            Some(NullReason::StationarityShrink) => {
                assert_eq!(nu_next, config.theta * rec.nu);
                assert_eq!(eps_next, config.mu * rec.eps);
                assert_eq!(x_next, &rec.x);
            }
            Some(NullReason::BalsExhausted) => {
                assert_eq!(nu_next, rec.nu);
                assert_eq!(eps_next, config.mu * rec.eps);
                assert_eq!(x_next, &rec.x);
            }
            Some(NullReason::LbalsNull) => {
                assert_eq!((nu_next, eps_next), (rec.nu, rec.eps));
                assert_eq!(x_next, &rec.x);
            }
            None => {
                assert_eq!((nu_next, eps_next), (rec.nu, rec.eps));
                assert!(vec::dist(x_next, &rec.x) <= 2.0 * rec.t);
            }
        }
    }
    for s in descent_slacks(out, config.c) {
        assert!(s >= -1e-12, "descent slack {s}");
    }
}

#[test]
fn quadratic_never_needs_the_qp_away_from_the_minimum() {
    let p = half_square();
    let config = Config::for_dimension(2);
    let rule = StoppingRule::new(0.0, 5e-4);
    let out = solve(&p, p.x0(), &config, 0, Some(&rule));
    check_invariants(&out, &config);
    assert!(out.report.success);
    assert!(out.report.final_f.abs() < 5e-4);
    assert!(out.report.pii >= 0.9);

    let gs = config.clone().with_method(Method::Gs);
    let out = solve(&p, p.x0(), &gs, 0, Some(&rule));
    check_invariants(&out, &gs);
    assert!(out.report.success);
    assert_eq!(out.report.qp_count, out.report.iters);
    assert_eq!(out.report.nii, 0);
}

#[test]
fn absolute_value_sum_converges() {
    let p = abs_sum();
    let rule = StoppingRule::new(0.0, 5e-4);
    for method in [Method::Gsi, Method::Gs] {
        let config = Config::for_dimension(2).with_method(method);
        for seed in 0..5 {
            let out = solve(&p, p.x0(), &config, seed, Some(&rule));
            check_invariants(&out, &config);
            assert!(out.report.success, "{method} seed {seed}");
            assert!(out.report.final_f < 5e-4);
        }
    }
}

#[test]
fn mifflin2_from_randomized_starts() {
    let p = get_problem::<f64>("mifflin2", None).unwrap();
    let config = default_config(&p, Scale::Small);
    let rule = StoppingRule::new(-1.0, 5e-4);
    let mut wins = 0;
    let mut piis = Vec::new();
    for seed in 0..5 {
        let out = solve(&p, &start_point(&p, seed), &config, seed, Some(&rule));
        check_invariants(&out, &config);
        wins += out.report.success as usize;
        piis.push(out.report.pii);
    }
    assert!(wins >= 4);
    assert!(median(piis) >= 0.6);
}

#[test]
fn chained_lq_methods_agree_on_success() {
    let p = get_problem::<f64>("chained_lq", Some(50)).unwrap();
    let rule = StoppingRule::new(p.f_star().unwrap(), 5e-4);
    for seed in 0..5 {
        let start = start_point(&p, seed);
        let mut verdicts = Vec::new();
        for method in [Method::Gs, Method::Gsi] {
            let config = default_config(&p, Scale::Small).with_method(method);
            let out = solve(&p, &start, &config, seed, Some(&rule));
            check_invariants(&out, &config);
            verdicts.push(out.report.success);
        }
        assert_eq!(verdicts[0], verdicts[1], "seed {seed}");
    }
}

#[test]
fn invariants_hold_across_the_catalog() {
    let problems = [
        ("ql", None),
        ("wolfe", None),
        ("crescent", None),
        ("rosenbrock_ns", None),
        ("hs78", None),
        ("wong1", None),
        ("active_faces", Some(20)),
        ("chained_cb3_1", Some(20)),
        ("brown2", Some(20)),
        ("maxq", Some(20)),
        ("ncr1", Some(10)),
    ];
    for (name, n) in problems {
        let p = get_problem::<f64>(name, n).unwrap();
        let rule = StoppingRule::for_problem(&p);
        for method in [Method::Gs, Method::Gsi] {
            let mut config = default_config(&p, Scale::Small).with_method(method);
            config.max_iters = 300;
            let out = solve(&p, &start_point(&p, 3), &config, 3, rule.as_ref());
            check_invariants(&out, &config);
            if p.convexity() == gradsamp::Convexity::Convex {
                let fs = p.f_star().unwrap();
                for rec in &out.trace {
                    assert!(rec.f_x >= fs - 1e-9 * (1.0 + fs.abs()), "{name}: {} below f*", rec.f_x);
                }
            }
        }
    }
}

#[test]
fn bals_exhaustion_shrinks_only_the_radius() {
    // steep quadratic: a unit step from near the minimizer overshoots
    let p = Problem::from_fns(
        "steep",
        vec![0.01, 0.01],
        Some(0.0),
        |x: &[f64]| 50.0 * (x[0] * x[0] + x[1] * x[1]),
        |x: &[f64], g: &mut [f64]| {
            g[0] = 100.0 * x[0];
            g[1] = 100.0 * x[1];
        },
    );
    let mut config = Config::for_dimension(2);
    config.max_backtracks = 1;
    config.max_iters = 5;
    let out = solve(&p, p.x0(), &config, 0, None);
    check_invariants(&out, &config);
    let first = &out.trace[0];
    assert_eq!(first.null_reason, Some(NullReason::BalsExhausted));
    assert_eq!(out.trace[1].eps, 0.5 * first.eps);
    assert_eq!(out.trace[1].nu, first.nu);
}

#[test]
fn lbals_above_threshold_never_steps() {
    let p = abs_sum();
    let mut config = Config::for_dimension(2).fixed_tolerance_regime(0.1, 6.0);
    config.c = 0.1;
    config.max_iters = 20;
    let out = solve(&p, p.x0(), &config, 1, None);
    check_invariants(&out, &config);
    assert_eq!(out.report.serious_count, 0);
    assert_eq!(out.report.f_eval, 1);
    assert!(out
        .trace
        .iter()
        .all(|r| matches!(r.null_reason, Some(NullReason::LbalsNull | NullReason::StationarityShrink))));
}

#[test]
fn fixed_tolerance_regime_respects_the_serious_iteration_bound() {
    let p = abs_sum();
    let mut config = Config::for_dimension(2).fixed_tolerance_regime(0.1, 3.0);
    config.c = 0.1;
    config.f_l = Some(0.0);
    config.max_iters = 5000;
    let bound = serious_iteration_bound(&config, 5.0).unwrap();
    assert_eq!(bound, 1001);
    for seed in 0..5 {
        let out = solve(&p, p.x0(), &config, seed, None);
        check_invariants(&out, &config);
        assert!(out.report.serious_count as u64 <= bound);
        assert!(out.report.serious_count > 0);
    }
}

#[test]
fn landing_on_a_kink_triggers_the_perturbation() {
    let s = 1.0 / 2f64.sqrt();
    let p = Problem::from_fns_with_kinks(
        "abs_sum_kink",
        vec![s, 3.0],
        Some(0.0),
        |x: &[f64]| x[0].abs() + x[1].abs(),
        |x: &[f64], g: &mut [f64]| {
            g[0] = x[0].signum();
            g[1] = x[1].signum();
        },
        |x: &[f64]| x[0] == 0.0 || x[1] == 0.0,
    );
    let mut config = Config::for_dimension(2);
    config.max_iters = 1;
    let out = solve(&p, p.x0(), &config, 0, None);
    check_invariants(&out, &config);
    let rec = &out.trace[0];
    assert_eq!(rec.t, 1.0);
    assert!(rec.perturbed);
    let x = &out.report.final_x;
    assert!(x[0] != 0.0);
    // the unperturbed candidate is (0, 3 - s)
    assert!(vec::dist(x, &[0.0, 3.0 - s]) <= rec.t.min(rec.eps));
    assert!(rec.f_next - rec.f_x < -config.c * rec.t * rec.g_norm);
}

#[test]
fn identical_inputs_reproduce_the_trace() {
    let p = get_problem::<f64>("crescent", None).unwrap();
    let rule = StoppingRule::for_problem(&p);
    for method in [Method::Gs, Method::Gsi] {
        let config = default_config(&p, Scale::Small).with_method(method);
        let start = start_point(&p, 4);
        let a = solve(&p, &start, &config, 4, rule.as_ref());
        let b = solve(&p, &start, &config, 4, rule.as_ref());
        assert_eq!(a.trace, b.trace);
        let mut ra = a.report.clone();
        let mut rb = b.report.clone();
        (ra.wall_time, ra.qp_time, rb.wall_time, rb.qp_time) = (0.0, 0.0, 0.0, 0.0);
        assert_eq!(ra, rb);

        let mut buf = Vec::new();
        write_trace_jsonl(&mut buf, &a.trace).unwrap();
        let back = read_trace_jsonl::<f64>(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(back, a.trace);
    }
}

#[test]
fn target_rule_is_consistent_with_final_f() {
    let p = get_problem::<f64>("wolfe", None).unwrap();
    let rule = StoppingRule::for_problem(&p).unwrap();
    let config = default_config(&p, Scale::Small);
    let out = solve(&p, &start_point(&p, 0), &config, 0, Some(&rule));
    assert_eq!(out.report.stop_reason, StopReason::TargetMet);
    let f = out.report.final_f;
    assert!((f - rule.f_star).abs() / (rule.f_star.abs() + 1.0) < rule.tol);
}
