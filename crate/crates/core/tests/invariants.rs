use std::f64::consts::PI;

use bergkern::bergman::{exact_kernel, kernel, KernelRequest, NamedMap};
use bergkern::geometry::{CPoint, DomainSpec, GaugeExpr};
use bergkern::green::{green_balanced, sublevel_volume, GreenFunction, SublevelEstimator};
use bergkern::verifier::checks::{check_monotonicity, NestedPair};
use bergkern::verifier::MarginScale;
use num_complex::Complex64;
use proptest::prelude::*;

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

fn gauge() -> impl Strategy<Value = GaugeExpr> {
    let leaf = (0..2usize, 0.3..2.0f64).prop_map(|(c, r)| GaugeExpr::leaf(c, r));
    let both = (0.3..2.0f64, 0.3..2.0f64);
    prop_oneof![
        both.clone().prop_map(|(a, b)| GaugeExpr::euclidean(&[a, b])),
        both.clone().prop_map(|(a, b)| GaugeExpr::max_of_leaves(&[a, b])),
        (both, 1.0..6.0f64).prop_map(|((a, b), p)| GaugeExpr::Pnorm {
            p,
            weights: vec![1.0, 1.0],
            terms: vec![GaugeExpr::leaf(0, a), GaugeExpr::leaf(1, b)]
        }),
        (leaf.clone(), leaf, 0.1..0.9f64).prop_map(|(x, y, w)| GaugeExpr::Max {
            terms: vec![
                GaugeExpr::leaf(0, 1.0),
                GaugeExpr::leaf(1, 1.0),
                GaugeExpr::Geomean { weights: vec![w, 1.0 - w], terms: vec![x, y] }
            ]
        }),
    ]
}

fn point2() -> impl Strategy<Value = CPoint> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_map(|a| CPoint::new(vec![Complex64::new(a[0], a[1]), Complex64::new(a[2], a[3])]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauges_are_absolutely_homogeneous(g in gauge(), z in point2(), re in -3.0..3.0f64, im in -3.0..3.0f64) {
        let spec = DomainSpec::balanced(g, 2).unwrap();
        let lambda = Complex64::new(re, im);
        let lhs = spec.gauge_eval(&z.scale(lambda)).unwrap();
        let rhs = lambda.norm() * spec.gauge_eval(&z).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn green_is_log_gauge_and_negative_inside(g in gauge(), z in point2()) {
        let spec = DomainSpec::balanced(g, 2).unwrap();
        let m = spec.gauge_eval(&z).unwrap();
        prop_assume!(m > 1e-6 && m < 1.0);
        let v = green_balanced(&spec, &z).unwrap().0;
        prop_assert!(v < 0.0);
        prop_assert!((v - m.ln()).abs() <= 1e-14);
    }

    #[test]
    fn disk_kernel_transforms_under_automorphisms(ax in -0.6..0.6f64, ay in -0.6..0.6f64, rot in 0.0..6.3f64, r in 0.0..0.9f64, t in 0.0..6.3f64) {
        let map = NamedMap::DiskAutomorphism { a: Complex64::new(ax, ay), rotation: rot };
        let z = CPoint::scalar(Complex64::from_polar(r, t)).unwrap();
        let fz = map.apply(&z).unwrap();
        let lhs = exact_kernel(&DomainSpec::Disk, &fz).unwrap().density * map.jacobian_det(&z).norm_sqr();
        let rhs = exact_kernel(&DomainSpec::Disk, &z).unwrap().density;
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs);
    }

    #[test]
    fn kernels_decrease_on_nested_polydiscs(r1 in 0.3..1.0f64, r2 in 0.3..1.0f64, s in 1.0..2.0f64, x in -0.25..0.25f64, y in -0.25..0.25f64) {
        let inner = DomainSpec::Polydisc(vec![r1, r2]);
        let outer = DomainSpec::Polydisc(vec![r1 * s, r2 * s]);
        let z = CPoint::real(&[x, y]).unwrap();
        let ki = exact_kernel(&inner, &z).unwrap().density;
        let ko = exact_kernel(&outer, &z).unwrap().density;
        prop_assert!(ko <= ki * (1.0 + 1e-15));
    }

    #[test]
    fn sublevel_volumes_scale_exactly(a in 0.1..6.0f64) {
        let green = GreenFunction::origin(DomainSpec::Ball(2)).unwrap();
        let v = sublevel_volume(&green, a, &SublevelEstimator::Exact).unwrap().value;
        prop_assert!(((4.0 * a).exp() * v - PI * PI / 2.0).abs() <= 1e-12);
    }
}

#[test]
fn sampled_results_do_not_depend_on_thread_count() {
    let green = GreenFunction::disk(Complex64::new(0.3, 0.1)).unwrap();
    let est = SublevelEstimator::MonteCarlo { samples: 100_000, seed: 5 };
    let one = in_pool(1, || sublevel_volume(&green, 1.5, &est).unwrap());
    let four = in_pool(4, || sublevel_volume(&green, 1.5, &est).unwrap());
    assert_eq!(one, four);
}

#[test]
fn kinked_domain_nested_in_the_polydisc() {
    let pairs = vec![NestedPair {
        inner: DomainSpec::kinked_example(),
        outer: DomainSpec::Polydisc(vec![1.0, 1.0]),
        point: CPoint::real(&[0.1, 0.05]).unwrap(),
    }];
    let r = check_monotonicity(&pairs, &KernelRequest::Auto, 1).unwrap();
    assert!(r.passed, "{r:?}");
    assert_eq!(r.scale, MarginScale::Sigma);
    let bad = vec![NestedPair {
        inner: DomainSpec::Polydisc(vec![1.0, 1.0]),
        outer: DomainSpec::kinked_example(),
        point: CPoint::real(&[0.1, 0.05]).unwrap(),
    }];
    assert!(check_monotonicity(&bad, &KernelRequest::Auto, 1).is_err());
}

#[test]
fn auto_kernel_falls_back_to_the_series() {
    let spec = DomainSpec::kinked_example();
    let k = kernel(&spec, &CPoint::origin(2), &KernelRequest::Auto).unwrap();
    let v = 16.0 / (PI * PI * (1.0 + 4.0 * 2f64.ln()));
    assert!((k.density - v).abs() < 1e-8 * v, "{} vs {v}", k.density);
}
