//! Comparisons against values computed outside this crate: arbitrary
//! precision hypergeometric values, a reference SVD, closed forms.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use hypergroup_core::convolution::{convolve_mc, Rank1Quadrature};
use hypergroup_core::kernel::{abs_h, branch_im_log_h, kernel_d};
use hypergroup_core::linalg::CMat;
use hypergroup_core::parallel::ExecPolicy;
use hypergroup_core::sampling::{kappa, sample_su, stream_rng, BallLaw};
use hypergroup_core::special::{jacobi_phi, JacobiParams};
use hypergroup_core::{ChamberPoint, HypergroupElement};

/// `(Re λ, Im λ, α, β, t, Re φ, Im φ)`, evaluated with mpmath at 30 digits.
const PHI: [(f64, f64, f64, f64, f64, f64, f64); 6] = [
    (2.0, 0.0, 2.0, 0.5, 1.0, 0.274_212_968_048_217_7, 0.0),
    (1.0, 0.3, 0.5, -0.5, 2.0, 0.252_564_605_763_411_3, -0.148_819_167_051_384_8),
    (0.5, 0.0, 0.0, 1.0, 0.3, 0.909_958_471_583_834_6, 0.0),
    (0.5, 0.0, 3.5, -1.0, 5.0, 7.654_845_940_643_6e-6, 0.0),
    (2.0, 0.0, 2.0, 0.5, 10.0, -2.320_002_979_730_384e-15, 0.0),
    (0.0, -3.5, 2.0, 0.5, 1.7, 1.0, 0.0),
];

#[test]
fn jacobi_phi_matches_arbitrary_precision() {
    for (lr, li, a, b, t, re, im) in PHI {
        let v = jacobi_phi(Complex64::new(lr, li), JacobiParams::new(a, b).unwrap(), t).unwrap();
        let want = Complex64::new(re, im);
        assert!((v - want).norm() <= 1e-12 * want.norm(), "λ={lr}+{li}i α={a} β={b} t={t}: {v} vs {want}");
    }
}

fn to_na(m: &CMat) -> DMatrix<Complex64> {
    let n = m.order();
    DMatrix::from_fn(n, n, |i, j| m[(i, j)])
}

fn random_point(q: usize, rng: &mut impl Rng) -> ChamberPoint {
    ChamberPoint::sorted((0..q).map(|_| rng.random_range(0.0..3.0)).collect()).unwrap()
}

#[test]
fn kernel_matches_reference_decomposition() {
    let mut rng = stream_rng(11, 0);
    for i in 0..300 {
        let q = i % 3 + 1;
        let (t, s) = (random_point(q, &mut rng), random_point(q, &mut rng));
        let v = sample_su(q, &mut rng);
        let w =
            BallLaw::for_dimension(2.0 * q as f64 - 1.0 + rng.random_range(0.0..2.0), q).unwrap().sample(q, &mut rng);
        let sh = |x: &ChamberPoint, f: fn(f64) -> f64| {
            DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                q,
                x.coords().iter().map(|&c| Complex64::new(f(c), 0.0)),
            ))
        };
        let m = sh(&t, f64::sinh) * to_na(&w) * sh(&s, f64::sinh) + sh(&t, f64::cosh) * to_na(&v) * sh(&s, f64::cosh);
        let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        let d = kernel_d(&t, &s, &v, &w).unwrap();
        for (x, sigma) in d.coords().iter().zip(&sv) {
            assert!((x.cosh() - sigma).abs() <= 1e-10 * sigma, "q={q}: cosh d {} vs σ {sigma}", x.cosh());
        }
        let det = m.determinant();
        let a = abs_h(&t, &s, &v, &w).unwrap();
        assert!((a - det.norm()).abs() <= 1e-10 * det.norm());
        // the tracked branch differs from the principal one by a multiple of 2π
        let b = branch_im_log_h(&t, &s, &v, &w).unwrap();
        let k = (b - det.arg()) / (2.0 * PI);
        assert!((k - k.round()).abs() < 1e-9, "branch {b} vs principal {}", det.arg());
        assert!(b.abs() < q as f64 * PI / 2.0);
    }
}

#[test]
fn kappa_rank_one_polar_coordinates() {
    // ∫_disk (1 - r²)^{p-2} = π / (p - 1)
    for p in [1.5, 2.0, 3.0, 4.5, 10.0] {
        assert!((kappa(p, 1).unwrap() - PI / (p - 1.0)).abs() <= 1e-13 * PI);
    }
}

#[test]
fn rank_one_sampler_agrees_with_quadrature() {
    let (s, t) = (1.2, 0.5);
    let rule = Rank1Quadrature::new(2.5, 80, 80).unwrap();
    let mean_d = rule.integrate((s, 0.0), (t, 0.0), |d, _| Complex64::new(d, 0.0)).unwrap().re;
    let mean_cos = rule.integrate((s, 0.3), (t, 0.2), |_, th| Complex64::new(th.cos(), 0.0)).unwrap().re;
    let el = |x: f64, th: f64| HypergroupElement::new(ChamberPoint::new(vec![x]).unwrap(), th);
    let m = convolve_mc(&el(s, 0.3), &el(t, 0.2), 2.5, 200_000, 3, ExecPolicy::Parallel).unwrap();
    let n = m.len() as f64;
    let stats = |f: &dyn Fn(usize) -> f64| {
        let mean = (0..m.len()).map(f).sum::<f64>() / n;
        let var = (0..m.len()).map(|i| (f(i) - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    };
    let (md, sd) = stats(&|i| m.d(i)[0]);
    let (mc, sc) = stats(&|i| m.theta(i).unwrap().cos());
    assert!((md - mean_d).abs() < 4.0 * sd, "{md} vs {mean_d} (se {sd})");
    assert!((mc - mean_cos).abs() < 4.0 * sc, "{mc} vs {mean_cos} (se {sc})");
}
