use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::expr::{parse_expr, Expr, GrowthClass};
use crate::hyper::{builtin_corpus, delta_derivative, embed_real_analytic, pair, standard_suite, Hyperfunction1D, TestFunction};
use crate::quad::ContourSpec;
use crate::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn spec() -> ContourSpec {
    ContourSpec::default()
}

fn sech_f() -> Hyperfunction1D {
    embed_real_analytic("sech", parse_expr("sech(z)").unwrap(), 1.5, GrowthClass::ExponentialDecay(1.0), 2.0).unwrap()
}

fn gaussian_f() -> Hyperfunction1D {
    embed_real_analytic("gaussian", parse_expr("exp(-z^2)").unwrap(), 2.0, GrowthClass::ExponentialDecay(2.0), 3.0)
        .unwrap()
}

// π·sech(π/2), from ∫sech(x)e^{−ix}dx by high-precision real quadrature
const SECH_HAT_1: f64 = 1.252_040_331_252_147_6;
// ∫x²sech(x)dx = π³/4
const SECH_MU2: f64 = 7.751_569_170_074_955;

#[test]
fn transform_of_delta_is_one() {
    let f = fourier_transform(&delta_derivative(0), &spec()).unwrap();
    for xi in [-7.0, -1.0, 0.0, 0.5, 3.0, 20.0] {
        assert!((f.value(xi).unwrap() - c(1.0, 0.0)).norm() < 1e-10, "ξ = {xi}");
    }
}

#[test]
fn transform_examples() {
    let g = fourier_transform(&gaussian_f(), &spec()).unwrap();
    assert!((g.value(0.0).unwrap() - c(PI.sqrt(), 0.0)).norm() < 1e-10);
    let s = fourier_transform(&sech_f(), &spec()).unwrap();
    assert!((s.value(1.0).unwrap() - c(SECH_HAT_1, 0.0)).norm() < 1e-10);
    assert!((SECH_HAT_1 - PI / (PI / 2.0).cosh()).abs() < 1e-15);
}

#[test]
fn tempered_transform_is_rejected() {
    let f = Hyperfunction1D::new("t", Expr::one(), Expr::zero(), (1.0, 1.0), GrowthClass::Tempered(0.0));
    assert!(matches!(fourier_transform(&f, &spec()), Err(Error::NotAsymptotic { .. })));
}

#[test]
fn transform_derivatives_match_differences() {
    let s = fourier_transform(&sech_f(), &spec()).unwrap();
    for xi in [0.0, 0.7, 2.0] {
        for k in 1..=3 {
            let exact = s.derivative(k, xi).unwrap();
            let fd = s.finite_difference(k, xi, 2e-2).unwrap();
            assert!((exact - fd).norm() <= 1e-5 * (1.0 + exact.norm()), "k = {k}, ξ = {xi}: {exact} vs {fd}");
        }
    }
    let e = SmoothField::from_expr("g", &parse_expr("exp(-z^2/4)").unwrap(), GrowthClass::Asymptotic, 4);
    let exact = e.derivative(2, 0.3).unwrap();
    assert!((exact - e.finite_difference(2, 0.3, 1e-3).unwrap()).norm() < 1e-6);
    assert!(e.derivative(5, 0.0).is_err());
}

#[test]
fn transform_of_even_function_is_real_and_even() {
    let s = fourier_transform(&sech_f(), &spec()).unwrap();
    for xi in [0.25, 1.0, 3.5] {
        let (a, b) = (s.value(xi).unwrap(), s.value(-xi).unwrap());
        assert!((a - b).norm() <= 1e-9 && a.im.abs() <= 1e-9);
    }
}

#[test]
fn inverse_of_one_is_delta() {
    let one = SmoothField::from_expr("1", &Expr::one(), GrowthClass::Tempered(0.0), 6).with_spatial(SpatialEnvelope {
        growth: GrowthClass::Asymptotic,
        constant: 0.0,
        support_radius: Some(0.0),
    });
    let f = inverse_fourier(&one, &InverseOptions::default(), &spec()).unwrap();
    for phi in standard_suite() {
        let got = pair(&f, &phi, &spec()).unwrap().value;
        let want = phi.eval(c(0.0, 0.0)).unwrap();
        assert!((got - want).norm() < 1e-6, "{}: {got} vs {want}", phi.label);
    }
}

#[test]
fn inverse_of_gaussian_pair() {
    let g = SmoothField::from_expr("g", &parse_expr("sqrt_pi*exp(-z^2/4)").unwrap_or_else(|_| {
        Expr::mul(Expr::real(PI.sqrt()), parse_expr("exp(-z^2/4)").unwrap())
    }), GrowthClass::Asymptotic, 6);
    let opts = InverseOptions {
        spatial: Some(SpatialEnvelope {
            growth: GrowthClass::ExponentialDecay(2.0),
            constant: 3.0,
            support_radius: None,
        }),
        ..InverseOptions::default()
    };
    let f = inverse_fourier(&g, &opts, &spec()).unwrap();
    for phi in standard_suite() {
        let got = pair(&f, &phi, &spec()).unwrap().value;
        let want = pair(&gaussian_f(), &phi, &spec()).unwrap().value;
        assert!((got - want).norm() < 1e-8, "{}: {got} vs {want}", phi.label);
    }
    assert!(inverse_fourier(&g, &InverseOptions::default(), &spec()).is_err());
}

#[test]
fn round_trip_on_sech() {
    let f = sech_f();
    let back = inverse_fourier(&fourier_transform(&f, &spec()).unwrap(), &InverseOptions::default(), &spec()).unwrap();
    for phi in standard_suite() {
        let a = pair(&f, &phi, &spec()).unwrap().value;
        let b = pair(&back, &phi, &spec()).unwrap().value;
        assert!((a - b).norm() <= 1e-5 * (1.0 + a.norm()), "{}: {a} vs {b}", phi.label);
    }
}

#[test]
fn moment_examples() {
    assert!((moment(&delta_derivative(2), 2, &spec()).unwrap() - c(2.0, 0.0)).norm() < 1e-10);
    for k in 0..=3 {
        for n in 0..=3 {
            let want = if n == k {
                let f: f64 = (1..=k).map(|v| v as f64).product();
                if k % 2 == 0 { f } else { -f }
            } else {
                0.0
            };
            let got = moment(&delta_derivative(k), n, &spec()).unwrap();
            assert!((got - c(want, 0.0)).norm() < 1e-10, "k = {k}, n = {n}");
        }
    }
    assert!((moment(&sech_f(), 0, &spec()).unwrap() - c(PI, 0.0)).norm() < 1e-10);
    assert!((moment(&sech_f(), 2, &spec()).unwrap() - c(SECH_MU2, 0.0)).norm() < 1e-9);
    let t = Hyperfunction1D::new("t", Expr::one(), Expr::zero(), (1.0, 1.0), GrowthClass::Tempered(-2.0));
    assert!(matches!(moment(&t, 0, &spec()), Err(Error::NotAsymptotic { .. })));
}

#[test]
fn asymptotic_sum_examples() {
    let s = asymptotic_sum(&delta_derivative(1), 3, &spec()).unwrap();
    for (n, want) in [0.0, 1.0, 0.0, 0.0].iter().enumerate() {
        assert!((s.coefficients[n] - c(*want, 0.0)).norm() < 1e-10);
    }
    let s = asymptotic_sum(&sech_f(), 2, &spec()).unwrap();
    assert!((s.coefficients[0] - c(PI, 0.0)).norm() < 1e-10);
    assert!(s.coefficients[1].norm() < 1e-10);
    assert!((s.coefficients[2] - c(PI.powi(3) / 8.0, 0.0)).norm() < 1e-9);
    let s = asymptotic_sum(&gaussian_f(), 1, &spec()).unwrap();
    assert!((s.coefficients[0] - c(PI.sqrt(), 0.0)).norm() < 1e-10);
    assert!(s.coefficients[1].norm() < 1e-10);
}

#[test]
fn remainder_moments_vanish() {
    for f in [sech_f(), gaussian_f(), delta_derivative(2)] {
        for order in [0, 2, 4] {
            let s = asymptotic_sum(&f, order, &spec()).unwrap();
            for (n, m) in remainder_moments(&f, &s, order, &spec()).unwrap().iter().enumerate() {
                assert!(m.norm() <= 1e-7, "{} N = {order}, n = {n}: {m}", f.label);
            }
        }
    }
}

#[test]
fn parametric_slopes() {
    let lambdas = [4.0, 8.0, 16.0, 32.0, 64.0];
    let fit = parametric_order_check(&sech_f(), &TestFunction::gaussian(), 2, &lambdas, &spec()).unwrap();
    let slope = fit.slope.unwrap();
    assert!(!fit.vacuous && fit.pass && (slope + 5.0).abs() < 0.15, "{fit:?}");
    // mpmath: r(64) for sech against e^{−x²}, N = 2
    assert!((fit.residuals[4] - 4.442_300_575_419_4e-8).abs() < 1e-12, "{}", fit.residuals[4]);

    let fit = parametric_order_check(&delta_derivative(0), &TestFunction::sech(), 1, &lambdas, &spec()).unwrap();
    assert!(fit.vacuous && fit.pass && fit.slope.is_none());

    let fit = parametric_order_check(&sech_f(), &TestFunction::odd_gaussian(), 1, &lambdas, &spec()).unwrap();
    assert!(fit.vacuous && fit.pass, "{fit:?}");

    let shifted = embed_real_analytic("shifted", parse_expr("exp(-(z-1)^2)").unwrap(), 2.0, GrowthClass::ExponentialDecay(1.0), 3.0)
        .unwrap();
    let fit = parametric_order_check(&shifted, &TestFunction::gaussian(), 1, &lambdas, &spec()).unwrap();
    assert!(!fit.vacuous && fit.pass, "{fit:?}");
    assert!((fit.slope.unwrap() + 3.0).abs() < 0.2);
}

#[test]
fn taylor_examples() {
    let t = taylor_of_ft(&delta_derivative(1), 3, &spec()).unwrap();
    assert!((t.coefficients[1] - c(0.0, 1.0)).norm() < 1e-10);
    assert!(t.worst_relative() < 1e-8);
    let t = taylor_of_ft(&gaussian_f(), 4, &spec()).unwrap();
    assert!((t.coefficients[0] - c(PI.sqrt(), 0.0)).norm() < 1e-10);
    assert!((t.coefficients[2] - c(-PI.sqrt() / 4.0, 0.0)).norm() < 1e-10);
    assert!(t.coefficients[1].norm() < 1e-8 && t.coefficients[3].norm() < 1e-8);
    // cross-check the transform derivative against differencing the field
    let g = fourier_transform(&gaussian_f(), &spec()).unwrap();
    let fd = g.finite_difference(2, 0.0, 1e-2).unwrap();
    assert!((fd / 2.0 - t.coefficients[2]).norm() < 1e-5);
}

#[test]
fn moment_derivative_duality_on_corpus() {
    for f in builtin_corpus() {
        let t = taylor_of_ft(&f, 6, &spec()).unwrap();
        assert!(t.worst_relative() <= 1e-5, "{}: {:?}", f.label, t.checks);
    }
}

#[test]
fn realization_examples() {
    let r = realize_moments(&MomentSequence::real("one", &[1.0])).unwrap();
    assert_eq!(r.coefficients, vec![c(1.0, 0.0)]);
    assert!((moment(&r.hyperfunction, 0, &spec()).unwrap() - c(1.0, 0.0)).norm() < 1e-9);

    let mu = MomentSequence::real("m", &[1.0, 0.0, 2.0]);
    let r = realize_moments(&mu).unwrap();
    for (a, want) in r.coefficients.iter().zip([1.0, 0.0, 0.0]) {
        assert!((a - c(want, 0.0)).norm() < 1e-15);
    }
    assert!((moment(&r.hyperfunction, 2, &spec()).unwrap() - c(2.0, 0.0)).norm() < 1e-6);

    let r = realize_moments(&MomentSequence::real("m", &[1.0, 0.0, 0.0])).unwrap();
    for (a, want) in r.coefficients.iter().zip([1.0, 0.0, 1.0]) {
        assert!((a - c(want, 0.0)).norm() < 1e-15);
    }
    let mut bad = MomentSequence::real("b", &[1.0, 5.0]);
    bad.bound = Some((1.0, 2.0));
    assert!(matches!(realize_moments(&bad), Err(Error::MomentBound { k: 1, .. })));
}

#[test]
fn multiplier_examples() {
    let (m, _) = build_multiplier(WeightFunction::Power(0.5), Some(10), &[]).unwrap();
    assert_eq!(m.eval(c(0.0, 0.0)), c(1.0, 0.0));
    let (m, report) = build_multiplier(WeightFunction::Power(0.5), None, &[c(1.0, 0.0)]).unwrap();
    // Π(1 + 1/k³) to 30 digits
    assert!((m.eval(c(1.0, 0.0)).re - 2.428_189_792_098_870_3).abs() < 1e-9, "{}", m.eval(c(1.0, 0.0)));
    assert!(report.min_ratio_in_region > 0.0);
    let (m, report) = build_multiplier(WeightFunction::Table((1..=2000).map(|k| k as f64).collect()), Some(2000), &[c(0.0, 2.0)])
        .unwrap();
    assert!((m.eval(c(0.0, 2.0)).re + 2.075_548_290_362_693).abs() < 1e-9);
    assert!(report.sign_flips.contains(&c(0.0, 2.0)));
    let err = build_multiplier(WeightFunction::Table(vec![1.0, 3.0, 2.0]), None, &[]).unwrap_err();
    assert!(matches!(err, Error::InvalidArgument(_)));
}

#[test]
fn multiplier_operator_matches_product() {
    let m = Multiplier::new(WeightFunction::Power(1.0), 6).unwrap();
    let j = m.to_operator();
    for z in [c(0.3, 0.0), c(1.5, 0.4), c(0.0, 2.0)] {
        assert!((j.symbol(z) - m.eval(z)).norm() < 1e-12 * m.eval(z).norm().max(1.0));
    }
}

#[test]
fn structural_representation_of_delta() {
    let f = delta_derivative(0);
    let rep = structural_representation(&f, &Multiplier::unit(), &StructuralOptions::default(), &spec()).unwrap();
    // f₀ = e^{−|x|}/2
    for (x, v) in rep.xs.iter().zip(&rep.f0) {
        if x.abs() <= 5.0 {
            assert!((v - c((-x.abs()).exp() / 2.0, 0.0)).norm() < 1e-4, "x = {x}: {v}");
        }
    }
    let check = rep.verify(&f, &TestFunction::gaussian(), &spec()).unwrap();
    assert!(check.pass, "{check:?}");
}

#[test]
fn structural_representation_of_gaussian() {
    let f = gaussian_f();
    let m = Multiplier::new(WeightFunction::Power(1.0), 3).unwrap();
    let rep = structural_representation(&f, &m, &StructuralOptions::default(), &spec()).unwrap();
    assert!(rep.f0.iter().all(|v| v.im.abs() < 1e-8));
    let jump = rep.f0.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
    assert!(jump < 0.05);
    for phi in [TestFunction::gaussian(), TestFunction::sech()] {
        let check = rep.verify(&f, &phi, &spec()).unwrap();
        assert!(check.pass, "{}: {check:?}", phi.label);
    }
    let t = Hyperfunction1D::new("t", Expr::one(), Expr::zero(), (1.0, 1.0), GrowthClass::Tempered(0.0));
    assert!(matches!(
        structural_representation(&t, &m, &StructuralOptions::default(), &spec()),
        Err(Error::NotAsymptotic { .. })
    ));
}

#[test]
fn domination_failure_is_reported() {
    let err = structural_representation(&delta_derivative(4), &Multiplier::unit(), &StructuralOptions::default(), &spec())
        .unwrap_err();
    assert!(matches!(err, Error::Domination(_)), "{err}");
}

#[test]
fn infinite_order_operator_acts_as_multiplier() {
    // b_{2m} = 1/((2m)! m!), so (|b_n| n!)^{1/n} → 0
    let j = crate::hyper::LocalOperator::infinite("J", vec![], |n| {
        if n % 2 == 1 {
            return c(0.0, 0.0);
        }
        c(1.0 / (factorial(n) * factorial(n / 2)), 0.0)
    });
    let f = gaussian_f();
    let jf = crate::hyper::apply_local_operator(&j, &f).unwrap();
    // (1/2π)∫J(ξ)·πe^{−ξ²/2}dξ = √(π/2)·Σ(−1/2)^m/(m!)² = √(π/2)·J₀(√2)
    let phi = TestFunction::gaussian();
    let want = c(0.700_770_727_856_114_1, 0.0);
    let got = pair(&jf, &phi, &spec()).unwrap().value;
    assert!((got - want).norm() < 1e-6 * (1.0 + want.norm()), "{got} vs {want}");
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 16,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn realization_inverts_moments(values in proptest::collection::vec(-2.0f64..2.0, 1..=7)) {
        let mu = MomentSequence::real("p", &values);
        let r = realize_moments(&mu).unwrap();
        for (n, want) in values.iter().enumerate() {
            let got = moment(&r.hyperfunction, n, &spec()).unwrap();
            prop_assert!((got - c(*want, 0.0)).norm() <= 1e-6, "n = {}: {} vs {}", n, got, want);
        }
    }

    #[test]
    fn asymptotic_coefficients_follow_formula(values in proptest::collection::vec(-5.0f64..5.0, 1..=8)) {
        let mu = MomentSequence::real("p", &values);
        let s = AsymptoticSum::from_moments(&mu);
        let mut fact = 1.0;
        for (n, v) in values.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert_eq!(s.coefficients[n], c(sign * v / fact, 0.0));
        }
    }
}
