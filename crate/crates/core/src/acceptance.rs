//! The acceptance suite: one [`CriterionResult`] per numbered criterion,
//! each a list of measured quantities against pinned tolerances.
//!
//! Everything here is deterministic for a fixed seed; the seed only feeds
//! the random directions and random moment sequences.

use std::f64::consts::{PI, SQRT_2};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::{parse_expr, GrowthClass};
use crate::hyper::{
    builtin_corpus, delta_derivative, embed_real_analytic, pair, pair_at, standard_suite, Hyperfunction1D,
    TestFunction,
};
use crate::odeseries::{example_solutions, residual_check, solve_series, ComplexRational, PolyCoeffOperator, TailKind};
use crate::quad::ContourSpec;
use crate::radon::{
    builtin_radon_corpus, gevrey_probe, helgason_moments, point_expansion_display, point_expansion_exact,
    radon_asymptotic_sum, radon_transform, random_directions, sphere_directions, support_check,
    support_check_slices, two_route_check, DeltaCombo, DeltaTerm, DisplayForm, FourierRouteOptions,
    MultiDimFunction, MultiIndexOperator, SupportOptions, DEFAULT_HELGASON_CAP, GEVREY_HEADROOM,
};
use crate::spectral::{
    asymptotic_sum, fourier_transform, inverse_fourier, moment, moments, parametric_order_check, realize_moments,
    remainder_moments, InverseOptions, MomentSequence,
};
use crate::Result;

/// Number of criteria.
pub const CRITERIA: u32 = 14;

/// Criteria whose literal statement cannot be met; see the detail line of
/// each for the reason. The suite reports them as failures.
pub const KNOWN_FAILURES: &[u32] = &[10];

// pinned tolerances
const DELTA_TOL: f64 = 1e-8;
const ROUND_TRIP_TOL: f64 = 1e-5;
const SECH_HAT_TOL: f64 = 1e-6;
const DUALITY_TOL: f64 = 1e-5;
const REMAINDER_TOL: f64 = 1e-7;
const SLOPE_MARGIN: f64 = 0.25;
const REALIZE_TOL: f64 = 1e-6;
const TWO_ROUTE_TOL: f64 = 1e-5;
const GAUSS_SLICE_TOL: f64 = 1e-6;
const HELGASON_TOL: f64 = 1e-5;
const HOMOGENEITY_TOL: f64 = 1e-12;
const RADON_REMAINDER_TOL: f64 = 1e-6;
const SUPPORT_RATE_TOL: f64 = 1e-3;
const ODE_RESIDUAL_TOL: f64 = 1e-7;

// π·sech(π/2), the real-axis quadrature value of ∫sech(x)e^{−ix}dx
const SECH_HAT_1: f64 = 1.252_040_331_252_147_6;

/// One measured quantity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `measured ≤ tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
            pass: measured <= tolerance,
        }
    }

    /// A yes/no property; measured is 1 when it holds.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            measured: if ok { 1.0 } else { 0.0 },
            tolerance: 1.0,
            pass: ok,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u32, checks: Vec<Check>, detail: impl Into<String>) -> Self {
        CriterionResult {
            id,
            name: criterion_name(id).to_string(),
            pass: !checks.is_empty() && checks.iter().all(|c| c.pass),
            checks,
            detail: detail.into(),
        }
    }

    fn errored(id: u32, e: crate::Error) -> Self {
        CriterionResult {
            id,
            name: criterion_name(id).to_string(),
            pass: false,
            checks: Vec::new(),
            detail: format!("error: {e}"),
        }
    }

    /// `PASS  3 fourier round trip  [check 1.2e-9 ≤ 1e-5; …]`.
    pub fn line(&self) -> String {
        let checks: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                format!(
                    "{} {:.3e} {} {:.1e}",
                    c.name,
                    c.measured,
                    if c.pass { "<=" } else { ">" },
                    c.tolerance
                )
            })
            .collect();
        format!(
            "{} {:>2} {:<28} [{}]{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            checks.join("; "),
            if self.detail.is_empty() { String::new() } else { format!(" {}", self.detail) }
        )
    }
}

pub fn criterion_name(id: u32) -> &'static str {
    match id {
        1 => "delta calculus",
        2 => "contour independence",
        3 => "fourier round trip",
        4 => "moment derivative duality",
        5 => "expansion remainder",
        6 => "parametric order",
        7 => "moment realization",
        8 => "radon two routes",
        9 => "helgason structure",
        10 => "radon expansion",
        11 => "support criterion",
        12 => "ode series end to end",
        13 => "gevrey probe",
        14 => "determinism",
        _ => "unknown",
    }
}

/// Runs one criterion; errors become failed results.
pub fn run(id: u32, seed: u64) -> CriterionResult {
    let out = match id {
        1 => delta_calculus(),
        2 => contour_independence(),
        3 => fourier_round_trip(),
        4 => moment_duality(),
        5 => expansion_remainder(),
        6 => parametric_order(),
        7 => moment_realization(seed),
        8 => radon_two_routes(seed),
        9 => helgason_structure(seed),
        10 => radon_expansion(seed),
        11 => support_criterion(seed),
        12 => ode_series(),
        13 => gevrey(),
        14 => determinism(seed),
        other => Err(crate::Error::InvalidArgument(format!("no criterion {other}"))),
    };
    out.unwrap_or_else(|e| CriterionResult::errored(id, e))
}

/// All criteria in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=CRITERIA).map(|id| run(id, seed)).collect()
}

fn spec() -> ContourSpec {
    ContourSpec::default()
}

fn radon_spec() -> ContourSpec {
    ContourSpec::default().with_tol(1e-10)
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn embedded_sech() -> Result<Hyperfunction1D> {
    embed_real_analytic("sech", parse_expr("sech(z)")?, 1.5, GrowthClass::ExponentialDecay(1.0), 2.0)
}

fn delta_calculus() -> Result<CriterionResult> {
    let mut worst: f64 = 0.0;
    for n in 0..=5 {
        let d = delta_derivative(n);
        for phi in standard_suite() {
            let got = pair(&d, &phi, &spec())?.value;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let want = sign * phi.derivative_at(n, c(0.0))?;
            worst = worst.max((got - want).norm());
        }
    }
    Ok(CriterionResult::new(
        1,
        vec![Check::at_most("max |<d^n, phi> - (-1)^n phi^(n)(0)|", worst, DELTA_TOL)],
        "n <= 5, four test functions",
    ))
}

fn contour_independence() -> Result<CriterionResult> {
    let s = spec();
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for f in builtin_corpus() {
        for phi in standard_suite() {
            let strip = f.min_strip().min(phi.strip);
            let a = pair_at(&f, &phi, &s.with_offset(0.3 * strip))?;
            let b = pair_at(&f, &phi, &s.with_offset(0.6 * strip))?;
            let bound = 2.0 * (a.uncertainty() + b.uncertainty() + 2.0 * s.abs_tol);
            worst = worst.max((a.value - b.value).norm() / bound);
            pairs += 1;
        }
    }
    Ok(CriterionResult::new(
        2,
        vec![Check::at_most("max |a - b| / 2(tol + tails)", worst, 1.0)],
        format!("{pairs} pairings at offsets 0.3 and 0.6 of the strip"),
    ))
}

fn fourier_round_trip() -> Result<CriterionResult> {
    let f = embedded_sech()?;
    let hat = fourier_transform(&f, &spec())?;
    let back = inverse_fourier(&hat, &InverseOptions::default(), &spec())?;
    let mut worst: f64 = 0.0;
    for phi in standard_suite() {
        let a = pair(&f, &phi, &spec())?.value;
        let b = pair(&back, &phi, &spec())?.value;
        worst = worst.max((a - b).norm() / (1.0 + a.norm()));
    }
    let at_one = (hat.value(1.0)? - c(SECH_HAT_1)).norm();
    Ok(CriterionResult::new(
        3,
        vec![
            Check::at_most("suite relative discrepancy", worst, ROUND_TRIP_TOL),
            Check::at_most("|sech^(1) - oracle|", at_one, SECH_HAT_TOL),
        ],
        "",
    ))
}

/// Taylor derivatives `g⁽ᵏ⁾(0)`, `k ≤ kmax`, of the degree `n − 1`
/// Chebyshev interpolant of `g` on `[−h, h]`.
fn chebyshev_derivatives(g: impl Fn(f64) -> Result<Complex64>, n: usize, h: f64, kmax: usize) -> Result<Vec<Complex64>> {
    let nodes: Vec<f64> = (0..n).map(|j| (PI * (j as f64 + 0.5) / n as f64).cos()).collect();
    let values = nodes.iter().map(|&x| g(h * x)).collect::<Result<Vec<_>>>()?;
    let mut out = vec![Complex64::new(0.0, 0.0); kmax + 1];
    // low monomial coefficients of T_m by T_{m+1} = 2x T_m − T_{m−1}
    let mut prev = vec![0.0; kmax + 1];
    let mut cur = vec![0.0; kmax + 1];
    prev[0] = 1.0;
    if kmax >= 1 {
        cur[1] = 1.0;
    }
    for m in 0..n {
        let weight = if m == 0 { 1.0 } else { 2.0 } / n as f64;
        let cm: Complex64 = values
            .iter()
            .enumerate()
            .map(|(j, v)| v * (PI * m as f64 * (j as f64 + 0.5) / n as f64).cos())
            .sum::<Complex64>()
            * weight;
        let tm = match m {
            0 => prev.clone(),
            1 => cur.clone(),
            _ => {
                let next: Vec<f64> = (0..=kmax)
                    .map(|k| -prev[k] + if k > 0 { 2.0 * cur[k - 1] } else { 0.0 })
                    .collect();
                prev = std::mem::replace(&mut cur, next);
                cur.clone()
            }
        };
        for (o, t) in out.iter_mut().zip(&tm) {
            *o += cm * t;
        }
    }
    let mut fact = 1.0;
    for (k, o) in out.iter_mut().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        *o *= fact / h.powi(k as i32);
    }
    Ok(out)
}

fn moment_duality() -> Result<CriterionResult> {
    // f̂⁽ᵏ⁾(0) from transform values alone, so the comparison with the
    // contour moments is not the same integral twice
    let mut worst: f64 = 0.0;
    let corpus = builtin_corpus();
    for f in &corpus {
        let hat = fourier_transform(f, &spec())?;
        let d = chebyshev_derivatives(|xi| hat.value(xi), 32, 1.0, 6)?;
        let mu = moments(f, 6, &spec())?;
        for (k, (dk, m)) in d.iter().zip(&mu.values).enumerate() {
            let from_transform = Complex64::new(0.0, 1.0).powu(k as u32) * dk;
            worst = worst.max((from_transform - m).norm() / (1.0 + m.norm()));
        }
    }
    Ok(CriterionResult::new(
        4,
        vec![Check::at_most("max |i^k f^(k)(0) - mu^k| / (1 + |mu^k|)", worst, DUALITY_TOL)],
        format!(
            "k <= 6 on {} corpus entries; derivatives from a 32-node Chebyshev interpolant of the transform on [-1, 1]",
            corpus.len()
        ),
    ))
}

fn expansion_remainder() -> Result<CriterionResult> {
    let mut worst: f64 = 0.0;
    for f in builtin_corpus() {
        for order in 0..=4 {
            let s = asymptotic_sum(&f, order, &spec())?;
            worst = worst.max(max_of(remainder_moments(&f, &s, order, &spec())?.iter().map(|m| m.norm())));
        }
    }
    Ok(CriterionResult::new(
        5,
        vec![Check::at_most("max remainder moment", worst, REMAINDER_TOL)],
        "N <= 4, moments 0..N, whole corpus",
    ))
}

fn parametric_order() -> Result<CriterionResult> {
    let lambdas = [4.0, 8.0, 16.0, 32.0, 64.0];
    let sech = embedded_sech()?;
    let shifted = embed_real_analytic(
        "shifted",
        parse_expr("exp(-(z-1)^2)")?,
        2.0,
        GrowthClass::ExponentialDecay(1.0),
        3.0,
    )?;
    let boosted = parametric_order_check(&sech, &TestFunction::gaussian(), 2, &lambdas, &spec())?;
    let plain = parametric_order_check(&shifted, &TestFunction::gaussian(), 1, &lambdas, &spec())?;
    let mut checks = Vec::new();
    for (name, fit, n) in [("sech N=2", &boosted, 2.0), ("shifted N=1", &plain, 1.0)] {
        checks.push(Check::holds(format!("{name} non-vacuous"), !fit.vacuous));
        let slope = fit.slope.unwrap_or(f64::INFINITY);
        // slope ≤ −(N+2) + margin, written as slope + N + 2 ≤ margin
        checks.push(Check::at_most(format!("{name} slope + N + 2"), slope + n + 2.0, SLOPE_MARGIN));
    }
    let boost = boosted.slope.map_or(f64::INFINITY, |s| (s + 5.0).abs());
    checks.push(Check::at_most("sech |slope + N + 3|", boost, SLOPE_MARGIN));
    Ok(CriterionResult::new(
        6,
        checks,
        format!(
            "slopes {:.3} and {:.3}",
            boosted.slope.unwrap_or(f64::NAN),
            plain.slope.unwrap_or(f64::NAN)
        ),
    ))
}

fn moment_realization(seed: u64) -> Result<CriterionResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        let values: Vec<f64> = (0..7).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mu = MomentSequence::real(format!("random{i}"), &values);
        let r = realize_moments(&mu)?;
        for (n, want) in mu.values.iter().enumerate() {
            let got = moment(&r.hyperfunction, n, &spec())?;
            worst = worst.max((got - want).norm() / (1.0 + want.norm()));
        }
    }
    Ok(CriterionResult::new(
        7,
        vec![Check::at_most("max moment error", worst, REALIZE_TOL)],
        "5 random sequences of length 7 in [-1, 1]",
    ))
}

fn radon_two_routes(seed: u64) -> Result<CriterionResult> {
    let s = radon_spec();
    let suite = standard_suite();
    let opts = FourierRouteOptions::default();
    let corpus = builtin_radon_corpus();
    let mut worst: f64 = 0.0;
    for f in &corpus {
        for w in sphere_directions(f.dim(), 8, seed)? {
            for d in two_route_check(f, &w, &suite, &opts, &s)? {
                worst = worst.max(d.relative);
            }
        }
    }
    let gauss = corpus.iter().find(|f| f.label() == "gauss2").expect("corpus has gauss2");
    let want = c(PI / SQRT_2);
    let mut slice_err: f64 = 0.0;
    for w in sphere_directions(2, 8, seed)? {
        let v = radon_transform(gauss, &w, &s)?.pair(&TestFunction::gaussian(), &s)?;
        slice_err = slice_err.max((v - want).norm());
    }
    Ok(CriterionResult::new(
        8,
        vec![
            Check::at_most("max two-route relative gap", worst, TWO_ROUTE_TOL),
            Check::at_most("|<R gauss2, e^-t^2> - pi/sqrt2|", slice_err, GAUSS_SLICE_TOL),
        ],
        format!("{} corpus entries x 8 directions", corpus.len()),
    ))
}

fn helgason_structure(seed: u64) -> Result<CriterionResult> {
    let s = radon_spec();
    let mut worst: f64 = 0.0;
    let mut parity = true;
    let mut homogeneity: f64 = 0.0;
    for f in builtin_radon_corpus() {
        let dirs = random_directions(f.dim(), 4, seed.wrapping_add(1));
        for p in helgason_moments(&f, 4, DEFAULT_HELGASON_CAP, seed, &s)? {
            for ch in &p.checks {
                worst = worst.max((ch.direct - ch.polynomial).norm() / (1.0 + ch.direct.norm()));
            }
            for w in &dirs {
                parity &= p.poly.parity_holds(w);
                for scale in [0.5, 2.0, 3.0] {
                    homogeneity = homogeneity.max(p.poly.homogeneity_defect(w, scale));
                }
            }
        }
    }
    Ok(CriterionResult::new(
        9,
        vec![
            Check::at_most("max |p^k(w) - slice moment| rel", worst, HELGASON_TOL),
            Check::holds("parity exact", parity),
            Check::at_most("homogeneity defect", homogeneity, HOMOGENEITY_TOL),
        ],
        "k <= 4, whole radon corpus",
    ))
}

/// `3(2 − ½∂₁ + ∂₁∂₂²)δ(x − (¾, −5/4)) + ∂₂²δ(x − (0, ½))`.
pub fn point_example() -> Result<DeltaCombo> {
    let one = c(1.0);
    DeltaCombo::new(
        "mixed",
        2,
        vec![
            DeltaTerm {
                operator: MultiIndexOperator::new(2, vec![(vec![0, 0], c(2.0)), (vec![1, 0], c(-0.5)), (vec![1, 2], one)])?,
                point: vec![0.75, -1.25],
                weight: c(3.0),
            },
            DeltaTerm {
                operator: MultiIndexOperator::partial(vec![0, 2]),
                point: vec![0.0, 0.5],
                weight: one,
            },
        ],
    )
}

fn radon_expansion(seed: u64) -> Result<CriterionResult> {
    let s = radon_spec();
    let mut worst: f64 = 0.0;
    for f in builtin_radon_corpus() {
        let dirs = sphere_directions(f.dim(), 2, seed)?;
        for e in radon_asymptotic_sum(&f, 4, &dirs, &s)?.expansions {
            worst = worst.max(e.max_remainder());
        }
    }
    let combos = [DeltaCombo::delta("delta", vec![1.0, 0.0])?, point_example()?];
    let mut literal_misses = Vec::new();
    let mut corrected_misses = 0usize;
    for f in &combos {
        for k in 0..=6 {
            let exact = point_expansion_exact(f, k)?;
            if exact != point_expansion_display(f, k, DisplayForm::Literal)? {
                literal_misses.push(format!("{} k={k}", f.label));
            }
            if exact != point_expansion_display(f, k, DisplayForm::Corrected)? {
                corrected_misses += 1;
            }
        }
    }
    let detail = if literal_misses.is_empty() {
        String::new()
    } else {
        format!(
            "the printed 1/|a|! normalisation differs from the exact expansion at {}; \
             the 1/(k-|a|)! form matches at every k",
            literal_misses.join(", ")
        )
    };
    Ok(CriterionResult::new(
        10,
        vec![
            Check::at_most("max remainder slice moment", worst, RADON_REMAINDER_TOL),
            Check::at_most("degrees off the displayed form", literal_misses.len() as f64, 0.0),
            Check::at_most("degrees off the 1/(k-|a|)! form", corrected_misses as f64, 0.0),
        ],
        detail,
    ))
}

fn support_criterion(seed: u64) -> Result<CriterionResult> {
    let dirs = random_directions(2, 4, seed);
    let mut rate: f64 = f64::NEG_INFINITY;
    let mut all_pass = true;
    for a in [vec![0.6, -0.8], vec![0.3, 0.2], vec![-1.5, 0.5]] {
        let f = DeltaCombo::delta("delta_a", a)?;
        let radius = f.moment_bound().1;
        for stretch in [1.05, 1.5, 3.0] {
            for r in support_check_slices(&f, &dirs, &SupportOptions::new(stretch * radius))? {
                rate = rate.max(r.fitted_rate);
                all_pass &= r.pass();
            }
        }
    }
    let values: Vec<f64> = (0..20u32).map(|k| (1..=k).map(f64::from).product::<f64>().powi(2)).collect();
    let fact2 = support_check(&MomentSequence::real("fact2", &values), &SupportOptions::new(1.0))?;
    let diverges = !fact2.pass() && fact2.diagnosis.as_deref().is_some_and(|d| d.contains("diverges"));
    Ok(CriterionResult::new(
        11,
        vec![
            Check::holds("point supports pass", all_pass),
            Check::at_most("max fitted rate", rate, SUPPORT_RATE_TOL),
            Check::holds("(k!)^2 diagnosed divergent", diverges),
        ],
        "S from 1.05 to 3 times the moment radius 1.1|a|",
    ))
}

fn big_factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn real_rational(num: BigInt, den: BigInt) -> ComplexRational {
    ComplexRational::new(BigRational::new(num, den), BigRational::zero())
}

fn ode_series() -> Result<CriterionResult> {
    let l = PolyCoeffOperator::example();
    let d = solve_series(&l, TailKind::Delta, ComplexRational::one(), 30)?;
    let d_misses = d
        .coefficients
        .iter()
        .enumerate()
        .filter(|(n, v)| **v != real_rational(BigInt::one(), big_factorial(n + 1) * big_factorial(*n)))
        .count();
    let h = solve_series(&l, TailKind::FinitePart, ComplexRational::one(), 30)?;
    let h_misses = h
        .coefficients
        .iter()
        .enumerate()
        .filter(|(n, v)| {
            let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            **v != real_rational(sign, big_factorial(n + 1))
        })
        .count();
    let (f1, f2) = example_solutions(10)?;
    let suite = standard_suite();
    let r1 = residual_check(&f1.hyper, &l, &suite, &spec())?.max_residual;
    let r2 = residual_check(&f2.hyper, &l, &suite, &spec())?.max_residual;
    let rd = residual_check(&delta_derivative(0), &l, &suite, &spec())?.max_residual;
    Ok(CriterionResult::new(
        12,
        vec![
            Check::at_most("d_n off 1/((n+1)!n!)", d_misses as f64, 0.0),
            Check::at_most("h_n off (-1)^n/(n+1)!", h_misses as f64, 0.0),
            Check::holds("admissible", d.admissibility.pass && h.admissibility.pass),
            Check::at_most("f1 residual", r1, ODE_RESIDUAL_TOL),
            Check::at_most("f2 residual", r2, ODE_RESIDUAL_TOL),
            Check::holds("delta flagged", rd > 1e3 * ODE_RESIDUAL_TOL),
        ],
        format!("N = 30; delta residual {rd:.3}"),
    ))
}

fn gevrey() -> Result<CriterionResult> {
    let s = radon_spec();
    let corpus = builtin_radon_corpus();
    let mut ratio: f64 = 0.0;
    let mut fits = true;
    let mut details = Vec::new();
    for label in ["delta_a", "dx_delta"] {
        let f: &MultiDimFunction = corpus.iter().find(|f| f.label() == label).expect("corpus entry");
        let fit = gevrey_probe(f, &[0.6, 0.8], Complex64::new(0.0, 2.0), 4, &s)?;
        fits &= fit.pass && !fit.noise_dominated;
        for o in fit.orders.iter().filter(|o| o.included) {
            ratio = ratio.max(o.value / o.envelope);
        }
        details.push(format!("{label}: C {:.3e}, v {:.3}", fit.constant, fit.rate));
    }
    Ok(CriterionResult::new(
        13,
        vec![
            Check::holds("fits pass", fits),
            Check::at_most("max derivative / envelope", ratio, GEVREY_HEADROOM.exp()),
        ],
        details.join("; "),
    ))
}

fn determinism(seed: u64) -> Result<CriterionResult> {
    // the seeded criteria, run twice and compared as bytes
    let mut same = true;
    for id in [7, 9, 11] {
        let a = serde_json::to_string(&run(id, seed)).map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
        let b = serde_json::to_string(&run(id, seed)).map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
        same &= a == b;
    }
    Ok(CriterionResult::new(
        14,
        vec![Check::holds("seeded criteria byte-identical", same)],
        "criteria 7, 9 and 11 rerun",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_derivatives_of_exponential() {
        let d = chebyshev_derivatives(|x| Ok(Complex64::new((2.0 * x).exp(), 0.0)), 24, 1.0, 6).unwrap();
        for (k, v) in d.iter().enumerate() {
            let want = 2f64.powi(k as i32);
            assert!((v.re - want).abs() < 1e-8 * want, "k = {k}: {v}");
        }
    }

    #[test]
    fn criterion_lines_are_labelled() {
        let r = CriterionResult::new(3, vec![Check::at_most("x", 2.0, 1.0)], "");
        assert!(!r.pass);
        assert!(r.line().starts_with("FAIL  3 fourier round trip"));
        assert!(!CriterionResult::new(1, Vec::new(), "").pass);
    }
}
