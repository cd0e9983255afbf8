use num_complex::Complex64;
use proptest::prelude::*;

use hypergroup_core::checks::{involution_defect, scan_positivity};
use hypergroup_core::convolution::{convolve_mc, convolve_signed, random_walk, Convolver};
use hypergroup_core::kernel::branch_im_log_h;
use hypergroup_core::parallel::ExecPolicy;
use hypergroup_core::sampling::{sample_su, stream_rng, BallLaw};
use hypergroup_core::{ChamberPoint, HypergroupElement};

fn chamber(q: usize, max: f64) -> impl Strategy<Value = ChamberPoint> {
    prop::collection::vec(0.0..max, q).prop_map(|x| ChamberPoint::sorted(x).unwrap())
}

fn rank_and_points() -> impl Strategy<Value = (usize, ChamberPoint, ChamberPoint, f64)> {
    (1usize..=3).prop_flat_map(|q| (Just(q), chamber(q, 4.0), chamber(q, 4.0), 0.0f64..3.0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn chamber_part_stays_in_ball((q, s, t, dp) in rank_and_points(), seed in any::<u64>()) {
        let p = 2.0 * q as f64 - 1.0 + dp;
        let conv = Convolver::chamber(&s, &t, p).unwrap();
        let mut rng = stream_rng(seed, 0);
        let bound = (s.max_coord() + t.max_coord()).cosh();
        for _ in 0..50 {
            let d = conv.draw(&mut rng).unwrap();
            prop_assert!(d.d.max_coord().cosh() <= bound * (1.0 + 1e-12));
            prop_assert!(d.im_log_h.abs() < q as f64 * std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn mass_is_exactly_one((q, s, t, dp) in rank_and_points(), n in 1usize..3000, l in -2.0f64..2.0) {
        let p = 2.0 * q as f64 - 1.0 + dp;
        let x = HypergroupElement::new(s.clone(), 0.3);
        let y = HypergroupElement::new(t.clone(), -0.8);
        let m = convolve_mc(&x, &y, p, n, 5, ExecPolicy::Sequential).unwrap();
        prop_assert_eq!(m.total_mass(), Complex64::new(1.0, 0.0));
        let signed = convolve_signed(&s, &t, p, l, n, 5, ExecPolicy::Sequential).unwrap();
        prop_assert!(signed.total_variation() <= 1.0 + 1e-12);
    }

    #[test]
    fn identity_is_neutral((q, s, _t, dp) in rank_and_points(), theta in -5.0f64..5.0) {
        let p = 2.0 * q as f64 - 1.0 + dp;
        let x = HypergroupElement::new(s.clone(), theta);
        let m = convolve_mc(&x, &HypergroupElement::identity(q), p, 64, 1, ExecPolicy::Sequential).unwrap();
        for i in 0..m.len() {
            for (a, b) in m.d(i).iter().zip(s.coords()) {
                prop_assert!((a - b).abs() < 1e-7 * (1.0 + b));
            }
            prop_assert!((m.theta(i).unwrap() - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn involution_returns_to_identity((_q, s, _t, _dp) in rank_and_points(), theta in -20.0f64..20.0) {
        let d = involution_defect(&HypergroupElement::new(s, theta)).unwrap();
        prop_assert!(d.distance() < 1e-10, "{:?}", d);
    }

    #[test]
    fn weights_nonnegative_in_positivity_range(q in 1usize..=3, frac in -1.0f64..1.0, dp in 0.0f64..2.0, seed in any::<u64>()) {
        let l = frac / q as f64;
        let p = 2.0 * q as f64 - 1.0 + dp;
        let rows = scan_positivity(p, q, &[l], 500, seed, ExecPolicy::Sequential).unwrap();
        prop_assert!(rows[0].min >= -1e-12, "{:?}", rows);
    }

    #[test]
    fn walk_respects_step_bound(q in 1usize..=3, step in 0.05f64..1.0, seed in any::<u64>()) {
        let coords: Vec<f64> = (1..=q).map(|j| step / j as f64).collect();
        let step_el = HypergroupElement::new(ChamberPoint::new(coords).unwrap(), 0.2);
        let path = random_walk(&HypergroupElement::identity(q), 2.0 * q as f64, 30, &step_el, seed).unwrap();
        for (k, x) in path.iter().enumerate() {
            prop_assert!(x.t.max_coord() <= k as f64 * step * (1.0 + 1e-9) + 1e-7);
        }
    }

    #[test]
    fn branch_is_symmetric_under_transposition((q, s, t, dp) in rank_and_points(), seed in any::<u64>()) {
        let mut rng = stream_rng(seed, 0);
        let v = sample_su(q, &mut rng);
        let w = BallLaw::for_dimension(2.0 * q as f64 - 1.0 + dp, q).unwrap().sample(q, &mut rng);
        let a = branch_im_log_h(&t, &s, &v, &w).unwrap();
        let b = branch_im_log_h(&s, &t, &v.transpose(), &w.transpose()).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn zero_step_walk_is_constant() {
    let start = HypergroupElement::new(ChamberPoint::new(vec![0.9, 0.4]).unwrap(), 0.5);
    let path = random_walk(&start, 3.0, 20, &HypergroupElement::identity(2), 4).unwrap();
    for x in &path {
        assert!((x.t.coords()[0] - 0.9).abs() < 1e-7 && (x.t.coords()[1] - 0.4).abs() < 1e-7);
        assert!((x.theta - 0.5).abs() < 1e-12);
    }
}
