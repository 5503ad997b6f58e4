use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use super::*;
use crate::expr::{differentiate, parse_expr, GrowthClass};
use crate::hyper::TestFunction;
use crate::quad::ContourSpec;
use crate::spectral::MomentSequence;
use crate::Error;

// ∫√π e^{−t²}·e^{−t²} dt
const GAUSS2_PAIR: f64 = 2.221_441_469_079_183;
// π^{3/2}/√2, the same pairing for the Gaussian on ℝ³
const GAUSS3_PAIR: f64 = 3.937_402_486_430_605;
// ∫ e^{−((x₁−1/2)² + 2x₂²)} e^{−(0.6x₁ + 0.8x₂)²} dx
const SHIFTED_PAIR: f64 = 1.624_480_334_187_474_6;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn spec() -> ContourSpec {
    ContourSpec::default().with_tol(1e-10)
}

fn corpus_entry(label: &str) -> MultiDimFunction {
    builtin_radon_corpus()
        .into_iter()
        .find(|f| f.label() == label)
        .expect("corpus entry")
}

#[test]
fn gaussian_slice_pairing() {
    let f = corpus_entry("gauss2");
    for w in sphere_directions(2, 3, 11).unwrap() {
        let slice = radon_transform(&f, &w, &spec()).unwrap();
        let v = slice.pair(&TestFunction::gaussian(), &spec()).unwrap();
        assert!((v - GAUSS2_PAIR).norm() < 1e-8, "{w:?}: {v}");
    }
    let f = corpus_entry("gauss2_shifted");
    let v = radon_transform(&f, &[0.6, 0.8], &spec())
        .unwrap()
        .pair(&TestFunction::gaussian(), &spec())
        .unwrap();
    assert!((v - SHIFTED_PAIR).norm() < 1e-8, "{v}");
}

#[test]
fn gaussian_slice_in_three_dimensions() {
    let f = corpus_entry("gauss3");
    let w = [0.48, 0.6, 0.64];
    let slice = radon_transform(&f, &w, &ContourSpec::default().with_tol(1e-8)).unwrap();
    let v = slice.pair(&TestFunction::gaussian(), &spec()).unwrap();
    assert!((v - GAUSS3_PAIR).norm() < 1e-6, "{v}");
}

#[test]
fn point_slice_is_symbolic() {
    let f = corpus_entry("delta_a");
    let w = [0.6, 0.8];
    let slice = radon_transform(&f, &w, &spec()).unwrap();
    let SliceForm::Point(terms) = &slice.form else {
        panic!("expected a point slice");
    };
    assert_eq!(
        terms,
        &vec![SliceDelta {
            order: 0,
            center: 0.6,
            coefficient: c(1.0, 0.0)
        }]
    );
    let v = slice.pair(&TestFunction::gaussian(), &spec()).unwrap();
    assert!((v - (-0.36f64).exp()).norm() < 1e-10);
    // ∂_{x₁}δ(x − a) slices to ω₁δ′(t − aω), paired as −ω₁φ′(aω)
    let d = DeltaCombo::new(
        "dx",
        2,
        vec![DeltaTerm {
            operator: MultiIndexOperator::partial(vec![1, 0]),
            point: vec![0.5, 0.5],
            weight: c(1.0, 0.0),
        }],
    )
    .unwrap();
    let v = radon_transform(&d.into(), &w, &spec())
        .unwrap()
        .pair(&TestFunction::gaussian(), &spec())
        .unwrap();
    let t = 0.7;
    let want = -0.6 * (-2.0 * t * (-t * t as f64).exp());
    assert!((v - want).norm() < 1e-10, "{v} vs {want}");
}

#[test]
fn slices_are_even() {
    let phi = TestFunction::shifted_gaussian();
    for label in ["gauss2_shifted", "odd2", "dx_delta"] {
        let f = corpus_entry(label);
        let d = evenness_defect(&f, &[0.28, -0.96], &phi, &spec()).unwrap();
        assert!(d <= 1e-7, "{label}: {d}");
    }
}

#[test]
fn rejects_bad_directions_and_inputs() {
    let f = corpus_entry("gauss2");
    assert!(matches!(radon_transform(&f, &[1.0, 1.0], &spec()), Err(Error::InvalidArgument(_))));
    assert!(matches!(radon_transform(&f, &[1.0], &spec()), Err(Error::InvalidArgument(_))));
    assert!(matches!(
        SmoothRapid::parse("grow", 2, "exp(x1)*exp(-x2^2)", GrowthClass::ExponentialDecay(1.0), 1.0),
        Err(Error::Growth(_))
    ));
    assert!(SmoothRapid::parse("t", 2, "1/(1+x1^2+x2^2)", GrowthClass::Tempered(-2.0), 1.0).is_err());
    assert!(SmoothRapid::parse("x4", 4, "exp(-x4^2)", GrowthClass::Asymptotic, 1.0).is_err());
    assert!(SmoothRapid::parse("x3", 2, "exp(-x3^2)", GrowthClass::Asymptotic, 1.0).is_err());
}

#[test]
fn directions_are_unit_and_reproducible() {
    for dim in 1..=3 {
        let a = sphere_directions(dim, 8, 7).unwrap();
        assert_eq!(a, sphere_directions(dim, 8, 7).unwrap());
        for w in &a {
            check_direction(w, dim).unwrap();
        }
        for w in random_directions(dim, 5, 3) {
            check_direction(&w, dim).unwrap();
        }
    }
    assert_ne!(sphere_directions(2, 8, 7).unwrap(), sphere_directions(2, 8, 8).unwrap());
    let w = [0.48, 0.6, 0.64];
    let basis = complement_basis(&w);
    assert_eq!(basis.len(), 2);
    for (i, b) in basis.iter().enumerate() {
        let dot: f64 = b.iter().zip(&w).map(|(x, y)| x * y).sum();
        assert!(dot.abs() < 1e-15);
        for (j, e) in basis.iter().enumerate() {
            let d: f64 = b.iter().zip(e).map(|(x, y)| x * y).sum();
            assert!((d - if i == j { 1.0 } else { 0.0 }).abs() < 1e-15);
        }
    }
    assert_eq!(multi_indices(3, 2).len(), 6);
    assert_eq!(multi_indices(2, 3), vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]);
}

#[test]
fn fourier_route_recovers_gaussian_slice() {
    let f = corpus_entry("gauss2");
    let w = [0.6, 0.8];
    let field = ray_transform(&f, &w, &FourierRouteOptions::default(), &spec()).unwrap();
    for rho in [0.0, 1.0, 3.0] {
        let want = PI * (-rho * rho / 4.0f64).exp();
        assert!((field.value(rho).unwrap() - want).norm() < 1e-10, "ρ = {rho}");
    }
    let s = radon_via_fourier(&f, &w, &[0.0, 1.0], &FourierRouteOptions::default(), &spec()).unwrap();
    assert!((s.samples[0].1 - PI.sqrt()).norm() < 1e-6, "{:?}", s.samples[0]);
    assert!((s.samples[1].1 - PI.sqrt() * (-1.0f64).exp()).norm() < 1e-6);
}

#[test]
fn fourier_route_recovers_point_slice() {
    let f = corpus_entry("delta_a");
    let w = [0.28, -0.96];
    let s = radon_via_fourier(&f, &w, &[], &FourierRouteOptions::default(), &spec()).unwrap();
    let phi = TestFunction::shifted_gaussian();
    let v = s.pair(&phi, &spec()).unwrap();
    let want = phi.eval(c(0.28, 0.0)).unwrap();
    assert!((v - want).norm() < 1e-6, "{v} vs {want}");
}

#[test]
fn two_routes_agree() {
    let opts = FourierRouteOptions::default();
    let suite = crate::hyper::standard_suite();
    for label in ["gauss2_shifted", "odd2", "dx_delta"] {
        let f = corpus_entry(label);
        for d in two_route_check(&f, &[0.8, -0.6], &suite, &opts, &spec()).unwrap() {
            assert!(d.relative <= 1e-5, "{label} {}: {} vs {}", d.test, d.direct, d.fourier);
        }
    }
}

#[test]
fn gaussian_helgason_polynomials() {
    let f = corpus_entry("gauss2");
    let ps = helgason_moments(&f, 2, DEFAULT_HELGASON_CAP, 5, &spec()).unwrap();
    assert!((ps[0].poly.coefficient(&[0, 0]) - PI).norm() < 1e-9);
    for a in [[1, 0], [0, 1]] {
        assert!(ps[1].poly.coefficient(&a).norm() < 1e-9);
    }
    assert!((ps[2].poly.coefficient(&[2, 0]) - PI / 2.0).norm() < 1e-9);
    assert!(ps[2].poly.coefficient(&[1, 1]).norm() < 1e-9);
    assert!((ps[2].poly.coefficient(&[0, 2]) - PI / 2.0).norm() < 1e-9);
    for p in &ps {
        assert!(p.pass(), "{:?}", p.checks);
        assert_eq!(p.checks.len(), HELGASON_CHECK_DIRECTIONS);
    }
    assert!(helgason_moments(&f, 9, DEFAULT_HELGASON_CAP, 5, &spec()).is_err());
}

#[test]
fn helgason_consistency_up_to_degree_four() {
    let f = corpus_entry("gauss2_shifted");
    for p in helgason_moments(&f, 4, DEFAULT_HELGASON_CAP, 17, &spec()).unwrap() {
        assert!(p.pass(), "degree {}: {:?}", p.poly.degree, p.checks);
    }
    let f = corpus_entry("dx_delta");
    for p in helgason_moments(&f, 4, DEFAULT_HELGASON_CAP, 17, &spec()).unwrap() {
        assert!(p.pass(), "degree {}: {:?}", p.poly.degree, p.checks);
    }
}

#[test]
fn point_helgason_polynomial_is_power_of_projection() {
    let a = [0.75, -0.5];
    let f: MultiDimFunction = DeltaCombo::delta("d", a.to_vec()).unwrap().into();
    for k in 0..=5 {
        let p = helgason_moment(&f, k, 1, &spec()).unwrap();
        for w in sphere_directions(2, 5, 2).unwrap() {
            let want = (a[0] * w[0] + a[1] * w[1]).powi(k as i32);
            assert!((p.poly.eval(&w) - want).norm() < 1e-12);
        }
        assert!(p.pass());
    }
}

#[test]
fn radon_expansion_of_gaussian() {
    let f = corpus_entry("gauss2");
    let out = radon_asymptotic_sum(&f, 2, &[vec![1.0, 0.0]], &spec()).unwrap();
    let e = &out.expansions[0];
    let want = [PI, 0.0, PI / 4.0];
    for (got, w) in e.coefficients.iter().zip(want) {
        assert!((got - w).norm() < 1e-9, "{got} vs {w}");
    }
    assert!(e.form_gap() < 1e-12);
    assert!(e.max_remainder() <= 1e-6, "{:?}", e.remainder_moments);
}

#[test]
fn radon_expansion_remainders_on_corpus() {
    let dirs = sphere_directions(2, 2, 3).unwrap();
    for label in ["gauss2_shifted", "odd2", "delta_a", "dx_delta"] {
        let f = corpus_entry(label);
        let out = radon_asymptotic_sum(&f, 4, &dirs, &spec()).unwrap();
        for e in &out.expansions {
            assert!(e.max_remainder() <= 1e-6, "{label}: {:?}", e.remainder_moments);
            assert!(e.form_gap() <= 1e-12 * (1.0 + e.coefficients[0].norm()));
        }
        // partial sums are even: the degree-k coefficient flips with (−1)ᵏ
        for p in &out.polys {
            for w in &dirs {
                assert!(p.parity_holds(w));
            }
        }
    }
}

#[test]
fn odd_input_has_zero_leading_term() {
    let f = corpus_entry("odd2");
    let out = radon_asymptotic_sum(&f, 0, &[vec![0.6, 0.8]], &spec()).unwrap();
    assert!(out.polys[0].coefficient(&[0, 0]).norm() < 1e-12);
    assert!(out.expansions[0].coefficients[0].norm() < 1e-12);
}

#[test]
fn exact_point_expansion_against_displayed_formula() {
    let one = c(1.0, 0.0);
    let combos = [
        DeltaCombo::delta("delta", vec![1.0, 0.0]).unwrap(),
        DeltaCombo::new(
            "mixed",
            2,
            vec![
                DeltaTerm {
                    operator: MultiIndexOperator::new(
                        2,
                        vec![(vec![0, 0], c(2.0, 0.0)), (vec![1, 0], c(-0.5, 0.0)), (vec![1, 2], one)],
                    )
                    .unwrap(),
                    point: vec![0.75, -1.25],
                    weight: c(3.0, 0.0),
                },
                DeltaTerm {
                    operator: MultiIndexOperator::partial(vec![0, 2]),
                    point: vec![0.0, 0.5],
                    weight: one,
                },
            ],
        )
        .unwrap(),
    ];
    for f in &combos {
        for k in 0..=6 {
            let exact = point_expansion_exact(f, k).unwrap();
            let corrected = point_expansion_display(f, k, DisplayForm::Corrected).unwrap();
            assert_eq!(exact, corrected, "{} k = {k}", f.label);
        }
    }
    // J = 1: the printed 1/|α|! normalization agrees only while k ≤ 1
    let f = &combos[0];
    for k in 0..=4 {
        let exact = point_expansion_exact(f, k).unwrap();
        let literal = point_expansion_display(f, k, DisplayForm::Literal).unwrap();
        assert_eq!(exact == literal, k <= 1, "k = {k}");
    }
    let e3 = point_expansion_exact(f, 3).unwrap();
    assert_eq!(e3.coefficient(&[3, 0]).to_string(), "-1/6");
}

#[test]
fn radial_gaussian_has_no_tangential_derivatives() {
    let f = corpus_entry("gauss2");
    let fit = gevrey_probe(&f, &[1.0, 0.0], c(0.5, 1.0), 4, &spec()).unwrap();
    assert!(fit.noise_dominated);
    assert!(fit.pass);
    for o in &fit.orders[1..] {
        assert!(o.value <= 10.0 * o.noise, "order {}: {} vs noise {}", o.order, o.value, o.noise);
    }
}

#[test]
fn point_gevrey_probe_matches_closed_form() {
    let f = corpus_entry("delta_a");
    // along ω(θ) = cos θ (0.6, 0.8) + sin θ (0.8, −0.6), aω = cos(θ − θ₀),
    // so G(ω(θ), 2i) = (−1/2πi)/(2i − cos(θ − θ₀))
    let fit = gevrey_probe(&f, &[0.6, 0.8], c(0.0, 2.0), 4, &spec()).unwrap();
    assert!((fit.tangent[0] - 0.8).abs() < 1e-15 && (fit.tangent[1] + 0.6).abs() < 1e-15);
    let theta0 = 0.8f64.atan2(0.6);
    let g = parse_expr("(i/(2*pi))/(2*i - (exp(i*z) + exp(-i*z))/2)").unwrap();
    for o in &fit.orders {
        let want = differentiate(&g, o.order, 0).eval_z(c(-theta0, 0.0)).unwrap().norm();
        assert!((o.value - want).abs() <= 1e-3 * want + 1e-9, "order {}: {} vs {want}", o.order, o.value);
        assert!(o.value <= o.envelope * GEVREY_HEADROOM.exp());
    }
    assert!(!fit.noise_dominated);
    assert!(fit.pass, "{fit:?}");
    // at ω₀ = a the odd orders vanish and drop out of the fit
    let fit = gevrey_probe(&f, &[1.0, 0.0], c(0.0, 2.0), 4, &spec()).unwrap();
    assert!(fit.pass, "{fit:?}");
    assert!(!fit.orders[1].included && !fit.orders[3].included);
    assert!(matches!(gevrey_probe(&f, &[1.0, 0.0], c(0.0, 2.0), 6, &spec()), Err(Error::InvalidArgument(_))));
}

#[test]
fn geometric_moments_pass_support_check() {
    let values: Vec<f64> = (0..120).map(|k| 0.5f64.powi(k)).collect();
    let mut mu = MomentSequence::real("geometric", &values);
    mu.bound = Some((1.0, 0.5));
    let r = support_check(&mu, &SupportOptions::new(1.0)).unwrap();
    assert!(r.certified);
    for s in &r.samples {
        assert!((s.value.norm() - 0.5).abs() < 1e-12, "q = {}: {}", s.q, s.value);
    }
    assert!(r.fitted_rate.abs() < 1e-9);
    assert!(r.pass());
}

#[test]
fn delta_prime_moments_grow_polynomially() {
    let mut opts = SupportOptions::new(2.0);
    opts.complete = true;
    let mu = MomentSequence::real("delta'", &[0.0, -1.0]);
    let r = support_check(&mu, &opts).unwrap();
    for s in &r.samples {
        let want = PI * s.q.unsigned_abs() as f64 / 8.0;
        assert!((s.value.norm() - want).abs() < 1e-14);
    }
    assert!(r.fitted_rate.abs() < 1e-9);
    assert!((r.fitted_power - 1.0).abs() < 1e-9);
    assert!(r.pass());
}

#[test]
fn factorial_squared_moments_diverge() {
    let values: Vec<f64> = (0..20).map(|k| (1..=k).map(|j| j as f64).product::<f64>().powi(2)).collect();
    let r = support_check(&MomentSequence::real("fact2", &values), &SupportOptions::new(1.0)).unwrap();
    assert!(!r.pass());
    assert!(r.diagnosis.as_deref().unwrap().contains("diverges"));
    let mut bounded = MomentSequence::real("fact2", &values);
    bounded.bound = Some((1.0, 2.0));
    assert!(matches!(
        support_check(&bounded, &SupportOptions::new(1.0)),
        Err(Error::MomentBound { k: 3, .. })
    ));
}

#[test]
fn point_supports_pass_beyond_their_radius() {
    let f = DeltaCombo::delta("d", vec![0.6, -0.8]).unwrap();
    let dirs = sphere_directions(2, 4, 9).unwrap();
    for s in [1.2, 2.0, 5.0] {
        for r in support_check_slices(&f, &dirs, &SupportOptions::new(s)).unwrap() {
            assert!(r.certified, "S = {s}");
            assert!(r.fitted_rate <= 1e-3, "S = {s}: rate {}", r.fitted_rate);
            assert!(r.pass());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 64,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn homogeneous_polynomials_keep_parity(
        dim in 1usize..=3,
        k in 0usize..=5,
        seed in any::<u64>(),
        s in 0.1f64..3.0,
    ) {
        let idx = multi_indices(dim, k);
        let coeffs = idx
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), c(((seed >> (i % 60)) & 7) as f64 - 3.5, i as f64 * 0.25)))
            .collect();
        let p = HomogeneousPoly::new(dim, k, coeffs).unwrap();
        for w in random_directions(dim, 3, seed) {
            prop_assert!(p.parity_holds(&w));
            prop_assert!(p.homogeneity_defect(&w, s) < 1e-12);
        }
    }

    #[test]
    fn point_combos_pass_support_for_larger_periods(
        ax in -1.0f64..1.0,
        ay in -1.0f64..1.0,
        order in 0usize..=2,
        stretch in 1.05f64..4.0,
    ) {
        let f = DeltaCombo::new(
            "p",
            2,
            vec![DeltaTerm {
                operator: MultiIndexOperator::partial(vec![order, 0]),
                point: vec![ax, ay],
                weight: c(1.0, 0.0),
            }],
        )
        .unwrap();
        let s = stretch * f.moment_bound().1;
        let dirs = sphere_directions(2, 3, 1).unwrap();
        for r in support_check_slices(&f, &dirs, &SupportOptions::new(s)).unwrap() {
            prop_assert!(r.pass(), "S = {s}: {:?}", r);
        }
    }
}
