use num_complex::Complex64;
use proptest::prelude::*;

use super::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[test]
fn evaluates_basic_examples() {
    let e = parse_expr("z^2").unwrap();
    assert!(close(e.eval_z(c(1.0, 1.0)).unwrap(), c(0.0, 2.0), 1e-15));
    let e = parse_expr("sech(z)").unwrap();
    assert_eq!(e.eval_z(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
    let e = parse_expr("exp(-1/z)").unwrap();
    let v = e.eval_z(c(0.0, 1.0)).unwrap();
    assert!(close(v, c(1f64.cos(), 1f64.sin()), 1e-15));
}

#[test]
fn parses_delta_defining_function() {
    let e = parse_expr("1/(2*pi*i*z)").unwrap();
    assert!(matches!(e, Expr::Div(..)));
    let z = c(0.3, -0.7);
    let want = 1.0 / (2.0 * std::f64::consts::PI * c(0.0, 1.0) * z);
    assert!(close(e.eval_z(z).unwrap(), want, 1e-15));
}

#[test]
fn parses_exp_of_quotient() {
    let e = parse_expr("exp(-1/z)").unwrap();
    let Expr::Call(Builtin::Exp, inner) = e else {
        panic!("expected exp call");
    };
    assert!(matches!(*inner, Expr::Div(..) | Expr::Neg(_)));
}

#[test]
fn reports_unbalanced_parenthesis_offset() {
    let err = parse_expr("exp(-z^2").unwrap_err();
    assert_eq!(err.offset(), 9);
    assert!(matches!(err, ParseError::Syntax { .. }));
}

#[test]
fn rejects_unknown_identifier() {
    let err = parse_expr("2*foo(z)").unwrap_err();
    assert_eq!(
        err,
        ParseError::UnknownIdentifier {
            name: "foo".into(),
            offset: 3
        }
    );
    assert!(parse_expr("x0").is_err());
    assert!(parse_expr("z(1)").is_err());
    assert!(parse_expr("exp").is_err());
    assert!(parse_expr("z^1.5").is_err());
}

#[test]
fn differentiates_cubic() {
    let e = parse_expr("z^3").unwrap();
    let d = differentiate(&e, 1, 0);
    assert_eq!(d, parse_expr("3*z^2").unwrap());
    assert_eq!(differentiate(&e, 0, 0), e);
}

#[test]
fn second_derivative_of_gaussian_at_origin() {
    for text in ["exp(-z^2)", "gaussian(z)"] {
        let e = parse_expr(text).unwrap();
        let d2 = differentiate(&e, 2, 0);
        assert!(close(d2.eval_z(c(0.0, 0.0)).unwrap(), c(-2.0, 0.0), 1e-14));
    }
}

#[test]
fn derivative_of_delta_defining_function() {
    let e = parse_expr("1/(2*pi*i*z)").unwrap();
    let d = differentiate(&e, 1, 0);
    let z = c(0.0, 1.0);
    // d/dz (1/(2 pi i z)) = -1/(2 pi i z^2), and z^2 = -1 at z = i
    let want = 1.0 / (2.0 * std::f64::consts::PI * c(0.0, 1.0));
    assert!(close(d.eval_z(z).unwrap(), want, 1e-15));
    let h = 1e-5;
    let fd = (e.eval_z(z + h).unwrap() - e.eval_z(z - h).unwrap()) / (2.0 * h);
    assert!(close(d.eval_z(z).unwrap(), fd, 1e-9));
}

#[test]
fn sech_and_tanh_derivatives() {
    let e = parse_expr("sech(z)").unwrap();
    let d = differentiate(&e, 1, 0);
    let z = c(0.4, 0.2);
    let want = -(z.cosh().inv()) * z.tanh();
    assert!(close(d.eval_z(z).unwrap(), want, 1e-14));
    let t = differentiate(&parse_expr("tanh(z)").unwrap(), 1, 0);
    assert!(close(t.eval_z(z).unwrap(), z.cosh().inv().powi(2), 1e-14));
}

#[test]
fn sech_is_stable_far_out() {
    let e = parse_expr("sech(z)").unwrap();
    let v = e.eval_z(c(800.0, 0.3)).unwrap();
    assert!(v.norm() < 1e-300);
    let v = e.eval_z(c(-30.0, 0.0)).unwrap();
    assert!((v.re - 2.0 * (-30f64).exp()).abs() < 1e-25);
}

#[test]
fn pole_is_reported() {
    let e = parse_expr("1/z").unwrap();
    assert!(matches!(e.eval_z(c(0.0, 0.0)), Err(EvalError::PoleHit { .. })));
    let e = parse_expr("z^-2").unwrap();
    assert!(matches!(e.eval_z(c(0.0, 0.0)), Err(EvalError::PoleHit { .. })));
}

#[test]
fn multivariate_evaluation_and_partials() {
    let e = parse_expr("x1^2*x2 + exp(x3)").unwrap();
    assert_eq!(e.arity(), 3);
    let p = [c(2.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)];
    assert!(close(e.eval(&p).unwrap(), c(13.0, 0.0), 1e-14));
    let d = differentiate(&e, 1, 0);
    assert!(close(d.eval(&p).unwrap(), c(12.0, 0.0), 1e-14));
    assert!(matches!(
        e.eval(&p[..2]),
        Err(EvalError::MissingCoordinate { index: 3, .. })
    ));
}

#[test]
fn growth_class_ordering_and_text() {
    use GrowthClass::*;
    let classes = [
        ExponentialDecay(1.0),
        Asymptotic,
        Tempered(2.0),
        InfraExponential,
    ];
    for (i, a) in classes.iter().enumerate() {
        for (j, b) in classes.iter().enumerate() {
            assert_eq!(a.fits_within(b), i <= j, "{a} within {b}");
        }
        assert_eq!(a.to_string().parse::<GrowthClass>().unwrap(), *a);
    }
    assert!(Tempered(-1.0).fits_within(&Tempered(0.5)));
    assert!(!Tempered(1.0).fits_within(&Tempered(0.5)));
    assert!(ExponentialDecay(2.0).fits_within(&ExponentialDecay(1.0)));
    assert!("exp-decay(0)".parse::<GrowthClass>().is_err());
    assert!("bounded".parse::<GrowthClass>().is_err());
    let json = serde_json::to_string(&Tempered(1.5)).unwrap();
    assert_eq!(json, "\"tempered(1.5)\"");
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        Just(Expr::z()),
        Just(Expr::z()),
        (-2.0f64..2.0).prop_map(|v| Expr::real((v * 4.0).round() / 4.0)),
        Just(Expr::constant(c(0.0, 1.0))),
    ]
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| {
                // keep denominators away from zero on the sampled region
                let den = Expr::Add(Box::new(Expr::real(3.0)), Box::new(Expr::gaussian(b)));
                Expr::Div(Box::new(a), Box::new(den))
            }),
            inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
            (inner.clone(), -2i32..4).prop_map(|(a, n)| {
                if n < 0 {
                    let base = Expr::Add(Box::new(Expr::real(2.0)), Box::new(Expr::sech(a)));
                    Expr::Pow(Box::new(base), n)
                } else {
                    Expr::Pow(Box::new(a), n)
                }
            }),
            inner.clone().prop_map(|a| Expr::call(Builtin::Exp, Expr::sech(a))),
            inner.clone().prop_map(|a| Expr::call(Builtin::Sech, a)),
            inner.clone().prop_map(|a| Expr::call(Builtin::Tanh, a)),
            inner.prop_map(|a| Expr::call(Builtin::Gaussian, a)),
        ]
    })
}

fn point() -> impl Strategy<Value = Complex64> {
    (-0.5f64..0.5, -0.3f64..0.3).prop_map(|(a, b)| c(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn derivative_matches_central_difference(e in arb_expr(), z in point()) {
        let h = 1e-5;
        let (Ok(v), Ok(p), Ok(m)) = (e.eval_z(z), e.eval_z(z + h), e.eval_z(z - h)) else {
            return Err(TestCaseError::reject("pole"));
        };
        prop_assume!(v.norm() < 1e4);
        let d = differentiate(&e, 1, 0).eval_z(z).unwrap();
        let fd = (p - m) / (2.0 * h);
        prop_assert!(
            (d - fd).norm() <= 1e-6 * (1.0 + v.norm().max(d.norm())),
            "{e}: symbolic {d}, difference {fd}"
        );
    }

    #[test]
    fn print_parse_round_trip(e in arb_expr()) {
        let once = parse_expr(&e.to_string()).unwrap();
        let twice = parse_expr(&once.to_string()).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn evaluation_is_bit_identical(e in arb_expr(), z in point()) {
        let a = e.eval_z(z);
        let b = e.eval_z(z);
        match (a, b) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
            (a, b) => prop_assert_eq!(a, b),
        }
    }
}
