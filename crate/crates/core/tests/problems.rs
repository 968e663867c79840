mod common;

use common::{fd_check, instances};
use gradsamp::{catalog_json, get_problem, sample_ball, Convexity, ProblemError, RngStream};

#[test]
fn gradients_match_central_differences() {
    for p in instances() {
        let worst = fd_check(&p, 100);
        assert!(worst < 1e-5, "{}: relative error {worst}", p.label());
    }
}

#[test]
fn registered_start_is_not_below_the_minimum() {
    for p in instances() {
        let f0 = p.evaluate(p.x0()).unwrap();
        if let Some(fs) = p.f_star() {
            assert!(f0 >= fs, "{}: f(x0) = {f0} < f* = {fs}", p.label());
        }
    }
}

#[test]
fn evaluation_is_pure() {
    let mut rng = RngStream::new(9);
    for p in instances() {
        let x = sample_ball(&mut rng, p.x0(), 1.0);
        let a = p.evaluate(&x).unwrap();
        let b = p.evaluate(&x).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
    }
}

#[test]
fn evaluation_examples() {
    let maxq = get_problem::<f64>("maxq", Some(10)).unwrap();
    assert_eq!(maxq.evaluate(&[1.0; 10]).unwrap(), 1.0);
    let mut x = vec![0.5; 10];
    x[3] = -2.0;
    let g = maxq.gradient(&x).unwrap();
    let mut want = vec![0.0; 10];
    want[3] = -4.0;
    assert_eq!(g, want);

    let lq = get_problem::<f64>("chained_lq", Some(100)).unwrap();
    assert_eq!(lq.evaluate(&[1.0; 100]).unwrap(), -99.0);
    assert!((lq.f_star().unwrap() + 99.0 * 2f64.sqrt()).abs() < 1e-12);

    let cb3 = get_problem::<f64>("chained_cb3_2", Some(30)).unwrap();
    assert_eq!(cb3.evaluate(&[1.0; 30]).unwrap(), 58.0);

    let ql = get_problem::<f64>("ql", None).unwrap();
    assert_eq!(ql.dim(), 2);
    assert_eq!(ql.convexity(), Convexity::Convex);

    let big = get_problem::<f64>("maxq", Some(500)).unwrap();
    assert_eq!(big.f_star(), Some(0.0));
}

#[test]
fn lookup_errors() {
    assert!(matches!(get_problem::<f64>("nope", None), Err(ProblemError::UnknownProblem(_))));
    assert!(matches!(get_problem::<f64>("ql", Some(3)), Err(ProblemError::FixedDimension { .. })));
    assert!(matches!(get_problem::<f64>("maxq", None), Err(ProblemError::DimensionRequired(_))));
    let p = get_problem::<f64>("ql", None).unwrap();
    assert!(matches!(p.evaluate(&[1.0]), Err(ProblemError::DimensionMismatch { .. })));
}

#[test]
fn gradient_at_a_kink_is_refused() {
    let maxq = get_problem::<f64>("maxq", Some(3)).unwrap();
    let tie = [1.0, -1.0, 0.5];
    assert!(maxq.is_nondifferentiable(&tie));
    assert!(matches!(maxq.gradient(&tie), Err(ProblemError::NondifferentiablePoint(_))));
}

#[test]
fn checked_in_catalog_matches_the_registry() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../problems.json");
    let on_disk = std::fs::read_to_string(path).expect("problems.json at the workspace root");
    assert_eq!(on_disk, catalog_json(), "regenerate with `gradsamp list-problems --out problems.json`");
}
