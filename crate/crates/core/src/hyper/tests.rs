use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::expr::{parse_expr, Expr, GrowthClass};
use crate::quad::{integrate_interval, Adaptive, ContourSpec, Radius};
use crate::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sech_f() -> Hyperfunction1D {
    embed_real_analytic("sech", parse_expr("sech(z)").unwrap(), 1.5, GrowthClass::ExponentialDecay(1.0), 2.0).unwrap()
}

fn gaussian_f() -> Hyperfunction1D {
    embed_real_analytic("gaussian", parse_expr("exp(-z^2)").unwrap(), 2.0, GrowthClass::ExponentialDecay(2.0), 3.0)
        .unwrap()
}

fn spec() -> ContourSpec {
    ContourSpec::default()
}

fn real_axis(f: impl Fn(f64) -> f64, r: f64) -> f64 {
    let opts = Adaptive {
        abs_tol: 1e-13,
        max_subdivisions: 4000,
        max_panel: 1.0,
    };
    integrate_interval(|x| Ok(c(f(x), 0.0)), -r, r, opts).unwrap().value.re
}

#[test]
fn embedded_sech_against_sech() {
    let q = pair(&sech_f(), &TestFunction::sech(), &spec()).unwrap();
    assert!((q.value - c(2.0, 0.0)).norm() < 1e-8, "{}", q.value);
}

#[test]
fn embedded_gaussian_against_one() {
    let q = pair(&gaussian_f(), &TestFunction::monomial(0), &spec()).unwrap();
    assert!((q.value - c(PI.sqrt(), 0.0)).norm() < 1e-10);
}

#[test]
fn polynomial_declared_asymptotic_is_rejected() {
    let err = embed_real_analytic("z2", parse_expr("z^2").unwrap(), 1.0, GrowthClass::Asymptotic, 1.0).unwrap_err();
    assert!(matches!(err, Error::Growth(_)));
}

#[test]
fn delta_family_examples() {
    let g = TestFunction::gaussian();
    let want = [1.0, 0.0, -2.0];
    for (n, w) in want.iter().enumerate() {
        let q = pair(&delta_derivative(n), &g, &spec()).unwrap();
        assert!((q.value - c(*w, 0.0)).norm() < 1e-10, "n = {n}: {}", q.value);
    }
}

#[test]
fn delta_reproduces_derivatives_on_suite() {
    for phi in standard_suite() {
        for n in 0..=5 {
            let want = phi.derivative_at(n, c(0.0, 0.0)).unwrap() * if n % 2 == 0 { 1.0 } else { -1.0 };
            let got = pair(&delta_derivative(n), &phi, &spec()).unwrap().value;
            assert!((got - want).norm() <= 1e-8, "{} n = {n}: {got} vs {want}", phi.label);
        }
    }
}

fn lorentzian() -> Hyperfunction1D {
    let plus = parse_expr("-(1/(2*i))/(z+i)").unwrap();
    let minus = parse_expr("-(1/(2*i))/(z-i)").unwrap();
    Hyperfunction1D::new("lorentz", plus, minus, (1.0, 1.0), GrowthClass::Tempered(-2.0)).with_constant(1.0)
}

#[test]
fn lorentzian_against_one() {
    let f = lorentzian();
    assert!((f.boundary_value(0.7, 1e-9).unwrap() - c(1.0 / 1.49, 0.0)).norm() < 1e-8);
    // the 1/x² tail bound 2/R forces a long line for a tight tolerance
    let s = spec().with_tol(1e-6).with_radius(Radius::Fixed(2.1e6));
    let q = pair(&f, &TestFunction::monomial(0), &s).unwrap();
    assert!((q.value.re - 2.0 * 2.1e6f64.atan()).abs() < 1e-6);
    assert!((q.value.re - PI).abs() <= q.uncertainty());
    let short = spec().with_tol(1e-9).with_radius(Radius::Fixed(2.0e4));
    assert!(matches!(pair(&f, &TestFunction::monomial(0), &short), Err(Error::Quad(_))));
}

#[test]
fn tempered_against_quadratic_is_inadmissible() {
    let err = pair(&lorentzian(), &TestFunction::monomial(2), &spec()).unwrap_err();
    assert!(matches!(err, Error::Inadmissible(_)), "{err}");
}

#[test]
fn offset_outside_strip_is_rejected() {
    let s = spec().with_offset(1.6);
    assert!(matches!(pair_at(&sech_f(), &TestFunction::gaussian(), &s), Err(Error::InvalidArgument(_))));
}

#[test]
fn standardized_delta_at_i() {
    let v = standardized_value(&delta_derivative(0), c(0.0, 1.0), &spec()).unwrap();
    let want = c(0.0, 1.0) / (2.0 * PI) * (1f64).exp() / c(0.0, 1.0);
    assert!((v - want).norm() < 1e-10, "{v} vs {want}");
    assert!((v.re - 0.432_627_989_716_132_5).abs() < 1e-10);
}

#[test]
fn standardized_sech_pairs_like_sech() {
    let f = sech_f();
    let g = standardize(&f, &spec()).unwrap();
    for phi in [TestFunction::gaussian(), TestFunction::odd_gaussian()] {
        let a = pair(&f, &phi, &spec()).unwrap().value;
        let b = pair(&g, &phi, &spec().with_tol(1e-9)).unwrap().value;
        assert!((a - b).norm() < 1e-6, "{}: {a} vs {b}", phi.label);
    }
}

#[test]
fn standardized_zero_is_zero() {
    let z = Hyperfunction1D::zero();
    let grid = [c(0.3, 0.5), c(-2.0, -0.25), c(5.0, 0.1)];
    for v in standardize_on(&z, &grid, &spec()).unwrap() {
        assert!(v.norm() <= 1e-12);
    }
}

#[test]
fn derivative_of_delta_is_delta_prime() {
    let d = apply_local_operator(&LocalOperator::derivative(1), &delta_derivative(0)).unwrap();
    for phi in standard_suite() {
        let a = pair(&d, &phi, &spec()).unwrap().value;
        let b = pair(&delta_derivative(1), &phi, &spec()).unwrap().value;
        assert!((a - b).norm() < 1e-10);
    }
}

#[test]
fn second_order_operator_on_sech() {
    let j = LocalOperator::from_real("1+D^2", &[1.0, 0.0, 1.0]);
    let jf = apply_local_operator(&j, &sech_f()).unwrap();
    let got = pair(&jf, &TestFunction::gaussian(), &spec()).unwrap().value;
    let oracle = real_axis(|x| (-x * x).exp() * (4.0 * x * x - 1.0) / x.cosh(), 40.0);
    assert!((got.re - oracle).abs() < 1e-7, "{got} vs {oracle}");
    assert!((oracle - 0.654_683_635_145_967_2).abs() < 1e-10);
}

#[test]
fn constant_coefficients_are_not_admissible() {
    let j = LocalOperator::infinite("ones", vec![], |_| c(1.0, 0.0));
    assert!(matches!(j.check_admissible(), Err(Error::Admissibility(_))));
    assert!(matches!(apply_local_operator(&j, &sech_f()), Err(Error::Admissibility(_))));
    let ok = LocalOperator::infinite("exp", vec![], |n| {
        let f: f64 = (1..=n).map(|k| k as f64).product();
        c(1.0 / (f * f), 0.0)
    });
    assert!(ok.check_admissible().is_ok());
}

#[test]
fn scale_pair_examples() {
    let g = TestFunction::gaussian();
    for lambda in [1.0, 2.0, 4.0, -3.0] {
        let v = scale_pair(&delta_derivative(1), &g, lambda, &spec()).unwrap().value;
        assert!(v.norm() < 1e-12);
        let v = scale_pair(&delta_derivative(0), &g, lambda, &spec()).unwrap().value;
        assert!((v - c(1.0 / lambda.abs(), 0.0)).norm() < 1e-11);
    }
    let v = scale_pair(&sech_f(), &g, 4.0, &spec()).unwrap().value;
    assert!((v.re - 0.694_465_796_070_834_9).abs() < 1e-9, "{v}");
}

#[test]
fn support_is_preserved_by_local_operators() {
    // φ and φ + x⁸·e^{−x²} agree through order 7 at the origin
    let phi = TestFunction::gaussian();
    let bumped = TestFunction::parse("bumped", "exp(-z^2) + z^8*exp(-z^2)", 2.0, GrowthClass::ExponentialDecay(1.0), 100.0)
        .unwrap();
    let j = LocalOperator::from_real("J", &[0.5, -1.0, 2.0, 0.0, 0.25]);
    for n in 0..=2 {
        let f = apply_local_operator(&j, &delta_derivative(n)).unwrap();
        let a = pair(&f, &phi, &spec()).unwrap().value;
        let b = pair(&f, &bumped, &spec()).unwrap().value;
        assert!((a - b).norm() <= 1e-8, "n = {n}: {a} vs {b}");
    }
}

#[test]
fn adjoint_identity_on_corpus() {
    let j = LocalOperator::from_real("J", &[1.0, 0.5, -0.25]);
    let phi = TestFunction::gaussian();
    let jphi = j.adjoint().apply_test(&phi).unwrap();
    for f in builtin_corpus() {
        if !f.is_symbolic() {
            continue;
        }
        let a = pair(&apply_local_operator(&j, &f).unwrap(), &phi, &spec()).unwrap().value;
        let b = pair(&f, &jphi, &spec()).unwrap().value;
        assert!((a - b).norm() <= 1e-7 * (1.0 + b.norm()), "{}: {a} vs {b}", f.label);
    }
}

#[test]
fn builtin_corpus_loads() {
    let corpus = builtin_corpus();
    assert_eq!(corpus.len(), 8);
    for label in ["delta", "delta1", "delta2", "gaussian", "sech", "exp_inv"] {
        assert!(find(&corpus, label).is_ok(), "{label}");
    }
    assert!(find(&corpus, "nope").is_err());
    let exp_inv = find(&corpus, "exp_inv").unwrap();
    // ⟨e^{−1/z}/(2πi)⟩ gives Σ (−1)^k φ⁽ᵏ⁾(0)/(k!(k+1)!)-type sums; the k = 0
    // term dominates for slowly varying φ, so only check finiteness here
    let v = pair(exp_inv, &TestFunction::gaussian(), &spec()).unwrap().value;
    assert!(v.norm().is_finite());
}

#[test]
fn corpus_rejects_bad_records() {
    let text = r#"[{"label": "bad", "f_plus": "z^2", "f_minus": "0", "strip_plus": 1, "strip_minus": 1, "growth": "asymptotic"}]"#;
    assert!(load_corpus(text).is_err());
    let text = r#"[{"label": "pole", "f_plus": "1/(z-0.5*i)", "f_minus": "0", "strip_plus": 1, "strip_minus": 1, "growth": "asymptotic"}]"#;
    assert!(load_corpus(text).is_err());
    assert!(parse_corpus("{").is_err());
}

#[test]
fn contour_shift_invariance_on_corpus() {
    let phi = TestFunction::sech();
    for f in builtin_corpus() {
        let strip = f.min_strip().min(phi.strip);
        let a = pair_at(&f, &phi, &spec().with_offset(0.3 * strip)).unwrap().value;
        let b = pair_at(&f, &phi, &spec().with_offset(0.6 * strip)).unwrap().value;
        assert!((a - b).norm() < 1e-9, "{}: {a} vs {b}", f.label);
    }
}

fn exp_inv_oracle() -> Complex64 {
    // −Res₀ e^{−1/z}φ(z) for φ = e^{−z²}, using φ⁽²ᵐ⁾(0) = (−1)ᵐ(2m)!/m!:
    // Σₘ (−1)ᵐ/((2m+1)! m!)
    let mut s = 0.0;
    for m in 0..12 {
        let odd: f64 = (1..=2 * m + 1).map(|k| k as f64).product();
        let mf: f64 = (1..=m).map(|k| k as f64).product();
        s += if m % 2 == 0 { 1.0 } else { -1.0 } / (odd * mf);
    }
    c(s, 0.0)
}

#[test]
fn essential_singularity_matches_residue_series() {
    let corpus = builtin_corpus();
    let f = find(&corpus, "exp_inv").unwrap();
    let v = pair(f, &TestFunction::gaussian(), &spec()).unwrap().value;
    let want = exp_inv_oracle();
    assert!((v - want).norm() < 1e-9, "{v} vs {want}");
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 24,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn pairing_is_linear_in_both_slots(a in -2.0f64..2.0, b in -2.0f64..2.0, k in 0usize..3) {
        let d = delta_derivative(k);
        let s = sech_f();
        let combo = Hyperfunction1D::linear_combination("combo", &[(c(a, 0.0), &d), (c(0.0, b), &s)]);
        let phi = TestFunction::gaussian();
        let lhs = pair(&combo, &phi, &spec()).unwrap().value;
        let rhs = a * pair(&d, &phi, &spec()).unwrap().value + c(0.0, b) * pair(&s, &phi, &spec()).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));

        let sum = TestFunction::new(
            "sum",
            Expr::add(Expr::mul(Expr::real(a), TestFunction::gaussian().expr), Expr::mul(Expr::real(b), TestFunction::sech().expr)),
            1.5,
            GrowthClass::ExponentialDecay(1.0),
            a.abs() * std::f64::consts::E + b.abs() * 2.0,
        );
        let lhs = pair(&s, &sum, &spec()).unwrap().value;
        let rhs = a * pair(&s, &TestFunction::gaussian(), &spec()).unwrap().value
            + b * pair(&s, &TestFunction::sech(), &spec()).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }
}
