//! Outputs depend on the seed and the sample count only.

use num_complex::Complex64;

use hypergroup_core::checks::{check_constant_character, check_support_bound};
use hypergroup_core::convolution::{convolve_mc, convolve_signed};
use hypergroup_core::harness::{run_verify, RunConfig};
use hypergroup_core::parallel::{ExecPolicy, CHUNK};
use hypergroup_core::{ChamberPoint, HypergroupElement};

fn el(x: &[f64], theta: f64) -> HypergroupElement {
    HypergroupElement::new(ChamberPoint::new(x.to_vec()).unwrap(), theta)
}

fn csv(m: &hypergroup_core::measure::EmpiricalMeasure) -> Vec<u8> {
    let mut buf = Vec::new();
    m.write_csv(&mut buf).unwrap();
    buf
}

#[test]
fn policies_produce_identical_measures() {
    let n = 5 * CHUNK + 123;
    let (s, t) = (el(&[1.1, 0.5, 0.2], 0.3), el(&[0.8, 0.8, 0.1], -1.0));
    let seq = convolve_mc(&s, &t, 5.0, n, 77, ExecPolicy::Sequential).unwrap();
    let par = convolve_mc(&s, &t, 5.0, n, 77, ExecPolicy::Parallel).unwrap();
    assert_eq!(csv(&seq), csv(&par));
    let seq = convolve_signed(&s.t, &t.t, 5.0, 0.3, n, 78, ExecPolicy::Sequential).unwrap();
    let par = convolve_signed(&s.t, &t.t, 5.0, 0.3, n, 78, ExecPolicy::Parallel).unwrap();
    assert_eq!(csv(&seq), csv(&par));
}

#[test]
fn seeds_matter_and_repeat() {
    let (s, t) = (el(&[1.0], 0.0), el(&[0.5], 0.0));
    let a = convolve_mc(&s, &t, 3.0, 1000, 1, ExecPolicy::Parallel).unwrap();
    let b = convolve_mc(&s, &t, 3.0, 1000, 1, ExecPolicy::Parallel).unwrap();
    let c = convolve_mc(&s, &t, 3.0, 1000, 2, ExecPolicy::Parallel).unwrap();
    assert_eq!(csv(&a), csv(&b));
    assert_ne!(csv(&a), csv(&c));
}

#[test]
fn reductions_are_bitwise_stable() {
    let s = ChamberPoint::new(vec![0.7, 0.2]).unwrap();
    let t = ChamberPoint::new(vec![0.5, 0.4]).unwrap();
    let run =
        |policy| check_constant_character(&s, &t, 3.5, Complex64::new(0.5, 0.2), 3 * CHUNK + 9, 3, policy).unwrap();
    assert_eq!(format!("{:?}", run(ExecPolicy::Sequential)), format!("{:?}", run(ExecPolicy::Parallel)));
    let sb = |policy| check_support_bound(2, 2 * CHUNK + 1, 4, policy).unwrap().max_excess.to_bits();
    assert_eq!(sb(ExecPolicy::Sequential), sb(ExecPolicy::Parallel));
}

#[test]
fn verify_report_is_reproducible() {
    let cfg = RunConfig { q: 2, p: 3.5, l: 0.25, n_samples: 3000, ..RunConfig::default() };
    let a = run_verify(&cfg, ExecPolicy::Parallel).unwrap();
    let b = run_verify(&cfg, ExecPolicy::Sequential).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let names: Vec<&str> = a.checks.iter().map(|c| c.check.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
    assert!(!a.to_json().contains("time"));
    let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    assert_eq!(json["seed"], 42);
    assert_eq!(json["config"]["q"], 2);
    for c in json["checks"].as_array().unwrap() {
        for key in ["check", "grade", "value", "tol", "stderr", "pass"] {
            assert!(c.get(key).is_some(), "{key} missing in {c}");
        }
    }
}
