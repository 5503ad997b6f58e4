use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::error::{Error, QuadFailure};
use crate::expr::parse_expr;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn delta_against_constant_by_two_lines() {
    let g = |z: Complex64| Ok(-1.0 / (2.0 * PI * c(0.0, 1.0) * z));
    let spec = ContourSpec::default().with_radius(Radius::Fixed(50.0)).with_tol(1e-12);
    let upper = integrate_line(g, &spec.with_offset(0.5), None).unwrap();
    let lower = integrate_line(g, &spec.with_offset(-0.5), None).unwrap();
    // the open lines miss the arcs at ±R; their contribution is (1/π)·atan(η/R)
    // per side, and closing the contour with the two vertical sides recovers 1
    let left = integrate_path(g, c(-50.0, 0.5), c(-50.0, -0.5), spec.adaptive(1e-13)).unwrap();
    let right = integrate_path(g, c(50.0, -0.5), c(50.0, 0.5), spec.adaptive(1e-13)).unwrap();
    let closed = lower.value + right.value - upper.value + left.value;
    // counter-clockwise closed contour around the pole gives 2πi·res
    assert!((closed - c(-1.0, 0.0)).norm() < 1e-9, "{closed}");
    let two_lines = upper.value - lower.value;
    let missing = 2.0 * (0.5f64 / 50.0).atan() / PI;
    assert!((two_lines - (1.0 - missing)).norm() < 1e-9, "{two_lines}");
}

#[test]
fn shifted_gaussian_line() {
    let g = |z: Complex64| Ok((-z * z).exp());
    let spec = ContourSpec::default()
        .with_offset(0.3)
        .with_radius(Radius::Fixed(8.0))
        .with_tol(1e-12);
    let q = integrate_line(g, &spec, None).unwrap();
    // oracle: the same integral on the real axis
    let real = integrate_interval(|x| Ok(c((-x * x).exp(), 0.0)), -8.0, 8.0, spec.adaptive(1e-13))
        .unwrap();
    assert!((q.value - real.value).norm() < 1e-10);
    assert!((q.value.re - PI.sqrt()).abs() < 1e-10);
    assert!(q.error_estimate <= 1e-12);
}

#[test]
fn tempered_tail_fails() {
    let spec = ContourSpec::default().with_tol(1e-8);
    let tail = TailModel::new(GrowthClass::Tempered(2.0), 0.0, 1.0);
    let err = integrate_line(|z| Ok(z * z), &spec, Some(&tail)).unwrap_err();
    assert!(matches!(err, Error::Quad(QuadFailure::DivergentTail { .. })));
    let slow = TailModel::new(GrowthClass::Tempered(-1.5), 0.0, 1.0);
    let err = integrate_line(|z| Ok(z), &spec, Some(&slow)).unwrap_err();
    assert!(matches!(err, Error::Quad(QuadFailure::TailNotAchievable { .. })));
}

#[test]
fn tail_bound_values() {
    let b = tail_bound(GrowthClass::ExponentialDecay(1.0), 0.0, 20.0).unwrap();
    assert!((b - 2.0 * (-20f64).exp()).abs() < 1e-22);
    assert!((b - 4.122_307_244_877_116e-9).abs() < 1e-18);
    assert!(matches!(
        tail_bound(GrowthClass::Tempered(2.0), 0.0, 10.0),
        Err(Error::Quad(QuadFailure::DivergentTail { .. }))
    ));
    for w in [0.0, 1.0, 3.0] {
        let a = tail_bound(GrowthClass::Asymptotic, w, 40.0).unwrap();
        assert!((a - 2.0 / 40.0).abs() < 1e-15);
    }
    // weighted exponential tail against the exact value 2·e^{-R}(R^2 + 2R + 2)
    let r: f64 = 30.0;
    let exact = 2.0 * (-r).exp() * (r * r + 2.0 * r + 2.0);
    let b = tail_bound(GrowthClass::ExponentialDecay(1.0), 2.0, r).unwrap();
    assert!(b >= exact && b < 1.1 * exact);
}

#[test]
fn tail_bound_dominates_empirical_tail() {
    // sech(x) <= 2e^{-|x|}: declared ExponentialDecay(1) with constant 2
    let model = TailModel::new(GrowthClass::ExponentialDecay(1.0), 0.0, 2.0);
    let sech = |x: f64| Ok(c(1.0 / x.cosh(), 0.0));
    let opts = Adaptive {
        abs_tol: 1e-18,
        max_subdivisions: 2000,
        max_panel: f64::INFINITY,
    };
    for r in [4.0, 8.0, 12.0] {
        let part = integrate_interval(sech, r, 2.0 * r, opts).unwrap().value.re * 2.0;
        assert!(part <= model.bound(r).unwrap());
    }
}

#[test]
fn auto_radius_meets_tolerance() {
    let model = TailModel::new(GrowthClass::ExponentialDecay(1.0), 0.0, 2.0);
    let (r, b) = resolve_radius(Radius::Auto, Some(&model), 1e-10, 0.0).unwrap();
    assert!(b <= 1e-11);
    assert!(r / 1.25 < 30.0);
    let slow = TailModel::new(GrowthClass::Asymptotic, 0.0, 10.0);
    assert!(resolve_radius(Radius::Auto, Some(&slow), 1e-10, 0.0).is_err());
}

#[test]
fn box_integrals() {
    let tol = 1e-10;
    let g = |x: &[f64]| Ok(c((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.0));
    let q = integrate_box(g, &[(-8.0, 8.0); 2], tol, 2000).unwrap();
    assert!((q.value.re - PI).abs() < 1e-8);
    let m = |x: &[f64]| Ok(c(x[0] * x[0] * (-(x[0] * x[0] + x[1] * x[1])).exp(), 0.0));
    let q = integrate_box(m, &[(-8.0, 8.0); 2], tol, 2000).unwrap();
    assert!((q.value.re - PI / 2.0).abs() < 1e-8);
    let g3 = |x: &[f64]| Ok(c((-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])).exp(), 0.0));
    let q = integrate_box(g3, &[(-7.0, 7.0); 3], 1e-8, 2000).unwrap();
    assert!((q.value.re - PI.powf(1.5)).abs() < 1e-7);
    let err = integrate_box(|_| Ok(c(1.0, 0.0)), &[(0.0, 1.0); 4], tol, 10).unwrap_err();
    assert_eq!(err, Error::Quad(QuadFailure::Dimension(4)));
}

#[test]
fn convergence_failure_is_reported() {
    let opts = Adaptive {
        abs_tol: 1e-14,
        max_subdivisions: 5,
        max_panel: f64::INFINITY,
    };
    let err = integrate_interval(|x| Ok(c((50.0 * x).sin(), 0.0)), 0.0, 10.0, opts).unwrap_err();
    assert!(matches!(err, Error::Quad(QuadFailure::Convergence { .. })));
}

#[test]
fn oscillation_caps_panel_length() {
    let xi = 40.0;
    let spec = ContourSpec::default()
        .with_offset(0.0)
        .with_radius(Radius::Fixed(6.0))
        .with_frequency(xi)
        .with_tol(1e-12);
    let q = integrate_line(|z| Ok((-z * z).exp() * (c(0.0, -xi) * z).exp()), &spec, None).unwrap();
    // ∫ e^{-x²} e^{-ixξ} dx = √π e^{-ξ²/4}
    assert!((q.value - c(PI.sqrt() * (-xi * xi / 4.0).exp(), 0.0)).norm() < 1e-11);
    assert!(q.nodes_used >= NODES_PER_PANEL * 77);
}

#[test]
fn growth_spot_checks() {
    let sech = parse_expr("sech(z)").unwrap();
    let r = verify_growth(&sech, GrowthClass::ExponentialDecay(1.0), &[5.0, 10.0, 20.0]);
    assert!(r.pass, "{r:?}");
    let z2 = parse_expr("z^2").unwrap();
    let r = verify_growth(&z2, GrowthClass::Asymptotic, &[10.0]);
    assert!(!r.pass);
    assert_eq!(r.first_violation.map(f64::abs), Some(10.0));
    let g = parse_expr("exp(-z^2)").unwrap();
    assert!(verify_growth(&g, GrowthClass::Asymptotic, &[5.0, 10.0, 20.0]).pass);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn halving_tolerance_never_raises_estimate(
        shift in -1.0f64..1.0,
        width in 0.3f64..2.0,
        eta in -0.4f64..0.4,
        tol_exp in 4i32..11,
    ) {
        let f = |z: Complex64| {
            let u = (z - shift) / width;
            Ok((-u * u).exp() / (c(2.0, 0.0) + z * z))
        };
        let tol = 10f64.powi(-tol_exp);
        let spec = ContourSpec::default().with_offset(eta).with_radius(Radius::Fixed(8.0)).with_tol(tol);
        let a = integrate_line(f, &spec, None).unwrap();
        let b = integrate_line(f, &spec.with_tol(tol / 2.0), None).unwrap();
        prop_assert!(b.error_estimate <= a.error_estimate);
    }

    #[test]
    fn contour_shift_invariance_same_sign(eta1 in 0.05f64..0.9, eta2 in 0.05f64..0.9) {
        // analytic in |Im z| < 1 (poles of sech at ±iπ/2 lie outside)
        let f = |z: Complex64| Ok(1.0 / z.cosh() * (-z * z / 4.0).exp());
        let spec = ContourSpec::default().with_radius(Radius::Fixed(12.0)).with_tol(1e-11);
        let a = integrate_line(f, &spec.with_offset(eta1), None).unwrap();
        let b = integrate_line(f, &spec.with_offset(eta2), None).unwrap();
        // both lines miss the same e^{-36}-small vertical sides
        prop_assert!((a.value - b.value).norm() <= 2.0 * (2e-11 + 2.0 * (-36f64 + 1.0).exp()));
    }
}
