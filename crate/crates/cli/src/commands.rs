use std::fmt;

use hypercalc::acceptance;
use hypercalc::expr::{parse_expr, GrowthClass};
use hypercalc::hyper::{
    apply_local_operator, builtin_corpus, delta_derivative, embed_real_analytic, find, load_corpus, pair, pair_at,
    standard_suite, standardize, Hyperfunction1D, TestFunction,
};
use hypercalc::odeseries::{
    apply_operator, assemble, compensate_constant, parse_coefficient, render_complex, residual_check, solve_series,
    to_complex64, PolyCoeffOperator, TailKind,
};
use hypercalc::quad::QuadResult;
use hypercalc::radon::{
    builtin_radon_corpus, gevrey_probe, helgason_moments, point_expansion_exact, radon_asymptotic_sum,
    radon_transform, radon_via_fourier, sphere_directions, support_check, support_check_slices, two_route_check,
    FourierRouteOptions, MultiDimFunction, SupportOptions, DEFAULT_HELGASON_CAP,
};
use hypercalc::spectral::{
    asymptotic_sum, build_multiplier, fourier_transform, inverse_fourier, moment, parametric_order_check,
    realize_moments, remainder_moments, structural_representation, taylor_of_ft, InverseOptions, MomentSequence,
    Multiplier, SmoothField, SpatialEnvelope, StructuralOptions, WeightFunction,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, JobConfig};
use crate::report::{im, num, re, Report, Verdict};

/// Why a command stopped.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config; exit status 2.
    Usage(ConfigError),
    /// The library rejected the input or failed to certify a result.
    Compute(hypercalc::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(e) => write!(f, "usage error: {e}"),
            CliError::Compute(e) => write!(f, "error: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Usage(e)
    }
}

impl From<hypercalc::Error> for CliError {
    fn from(e: hypercalc::Error) -> Self {
        CliError::Compute(e)
    }
}

impl CliError {
    /// Input the library rejects counts as a usage error.
    pub fn exit_code(&self) -> i32 {
        use hypercalc::Error::*;
        match self {
            CliError::Usage(_) => 2,
            CliError::Compute(Parse(_) | InvalidArgument(_) | NotAsymptotic { .. } | NotSymbolic(_) | Corpus(_) | Growth(_)) => 2,
            CliError::Compute(_) => 1,
        }
    }
}

type Out = Result<Report, CliError>;

/// Every subcommand, in help order.
pub const COMMANDS: &[&str] = &[
    "pair",
    "moments",
    "expand",
    "param-check",
    "fourier",
    "invfourier",
    "realize",
    "multiplier",
    "structural",
    "radon",
    "helgason",
    "radon-expand",
    "gevrey",
    "support-check",
    "ode-solve",
    "verify-all",
];

pub fn run(cfg: &JobConfig) -> Out {
    let command = cfg
        .command
        .as_deref()
        .ok_or_else(|| ConfigError::new("command", "no command given"))?;
    match command {
        "pair" => pair_cmd(cfg),
        "moments" => moments_cmd(cfg),
        "expand" => expand_cmd(cfg),
        "param-check" => param_check_cmd(cfg),
        "fourier" => fourier_cmd(cfg),
        "invfourier" => invfourier_cmd(cfg),
        "realize" => realize_cmd(cfg),
        "multiplier" => multiplier_cmd(cfg),
        "structural" => structural_cmd(cfg),
        "radon" => radon_cmd(cfg),
        "helgason" => helgason_cmd(cfg),
        "radon-expand" => radon_expand_cmd(cfg),
        "gevrey" => gevrey_cmd(cfg),
        "support-check" => support_check_cmd(cfg),
        "ode-solve" => ode_solve_cmd(cfg),
        "verify-all" => verify_all_cmd(cfg),
        other => Err(ConfigError::new("command", format!("unknown command `{other}`; expected one of {}", COMMANDS.join(", "))).into()),
    }
}

// inputs

fn corpus(cfg: &JobConfig) -> Result<Vec<Hyperfunction1D>, CliError> {
    match cfg.input.as_deref() {
        None | Some("corpus") => Ok(builtin_corpus()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::new("input", format!("cannot read corpus {path}: {e}")))?;
            Ok(load_corpus(&text)?)
        }
    }
}

fn growth(cfg: &JobConfig) -> Result<Option<GrowthClass>, CliError> {
    match &cfg.params.growth {
        None => Ok(None),
        Some(s) => s
            .parse::<GrowthClass>()
            .map(Some)
            .map_err(|e| ConfigError::new("params.growth", e).into()),
    }
}

/// The one-dimensional input: an expression, `δ⁽ⁿ⁾`, or a corpus entry.
fn source(cfg: &JobConfig) -> Result<Hyperfunction1D, CliError> {
    let p = &cfg.params;
    if let Some(text) = &p.expr {
        let e = parse_expr(text).map_err(hypercalc::Error::from)?;
        let g = growth(cfg)?.ok_or_else(|| ConfigError::new("params.growth", "required with params.expr"))?;
        let strip = p.strip.ok_or_else(|| ConfigError::new("params.strip", "required with params.expr"))?;
        let label = p.label.clone().unwrap_or_else(|| text.clone());
        return Ok(embed_real_analytic(label, e, strip, g, p.constant.unwrap_or(10.0))?);
    }
    if let Some(n) = p.delta {
        return Ok(delta_derivative(n));
    }
    let label = p
        .label
        .as_deref()
        .ok_or_else(|| ConfigError::new("params.label", "give a corpus label, an expression or a delta order"))?;
    let all = corpus(cfg)?;
    Ok(find(&all, label)?.clone())
}

fn test_function(name: &str) -> Result<TestFunction, ConfigError> {
    match name {
        "gaussian" => Ok(TestFunction::gaussian()),
        "sech" => Ok(TestFunction::sech()),
        "odd_gaussian" => Ok(TestFunction::odd_gaussian()),
        "shifted_gaussian" => Ok(TestFunction::shifted_gaussian()),
        other => Err(ConfigError::new(
            "params.test",
            format!("unknown test function `{other}`; expected suite, gaussian, sech, odd_gaussian or shifted_gaussian"),
        )),
    }
}

fn tests(cfg: &JobConfig) -> Result<Vec<TestFunction>, CliError> {
    match cfg.params.test.as_deref() {
        None | Some("suite") => Ok(standard_suite()),
        Some(name) => Ok(vec![test_function(name)?]),
    }
}

fn single_test(cfg: &JobConfig, default: &str) -> Result<TestFunction, CliError> {
    Ok(test_function(cfg.params.test.as_deref().unwrap_or(default))?)
}

fn pairing(cfg: &JobConfig, f: &Hyperfunction1D, phi: &TestFunction) -> Result<QuadResult, CliError> {
    let spec = cfg.spec();
    Ok(if cfg.contour.eta.is_some() {
        pair_at(f, phi, &spec)?
    } else {
        pair(f, phi, &spec)?
    })
}

fn radon_source(cfg: &JobConfig) -> Result<MultiDimFunction, CliError> {
    let label = cfg
        .params
        .label
        .as_deref()
        .ok_or_else(|| ConfigError::new("params.label", "give a label from the multidimensional corpus"))?;
    let all = builtin_radon_corpus();
    let labels: Vec<&str> = all.iter().map(|f| f.label()).collect();
    let known = labels.join(", ");
    all.into_iter()
        .find(|f| f.label() == label)
        .ok_or_else(|| ConfigError::new("params.label", format!("unknown entry `{label}`; known: {known}")).into())
}

/// Explicit direction, or seeded uniform directions.
fn directions(cfg: &JobConfig, dim: usize, default_count: usize) -> Result<Vec<Vec<f64>>, CliError> {
    if let Some(w) = &cfg.params.direction {
        if w.len() != dim {
            return Err(ConfigError::new("params.direction", format!("expected {dim} components, got {}", w.len())).into());
        }
        let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(ConfigError::new("params.direction", "must be nonzero").into());
        }
        return Ok(vec![w.iter().map(|x| x / n).collect()]);
    }
    Ok(sphere_directions(dim, cfg.params.directions.unwrap_or(default_count), cfg.seed())?)
}

fn vector(w: &[f64]) -> String {
    let parts: Vec<String> = w.iter().map(|x| num(*x)).collect();
    format!("({})", parts.join(" "))
}

fn complex(z: Complex64) -> String {
    if z.im == 0.0 {
        num(z.re)
    } else {
        format!("{}{}{}i", num(z.re), if z.im < 0.0 { "-" } else { "+" }, num(z.im.abs()))
    }
}

// one-dimensional commands

fn pair_cmd(cfg: &JobConfig) -> Out {
    let f = source(cfg)?;
    let suite = tests(cfg)?;
    let standardized = if cfg.params.standardize == Some(true) {
        Some(standardize(&f, &cfg.spec())?)
    } else {
        None
    };
    let delta = cfg.params.delta;
    let mut columns = vec!["test", "re", "im", "error_estimate", "tail_bound"];
    if delta.is_some() {
        columns.extend(["reference_re", "reference_im"]);
    }
    if standardized.is_some() {
        columns.extend(["standardized_re", "standardized_im"]);
    }
    #[derive(Serialize)]
    struct Row {
        test: String,
        result: QuadResult,
        reference: Option<Complex64>,
        standardized: Option<Complex64>,
    }
    let rows = suite
        .par_iter()
        .map(|phi| {
            let result = pairing(cfg, &f, phi)?;
            // ⟨δ⁽ⁿ⁾, φ⟩ = (−1)ⁿφ⁽ⁿ⁾(0) from the symbolic derivative
            let reference = match delta {
                Some(n) => {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    Some(sign * phi.derivative_at(n, Complex64::new(0.0, 0.0))?)
                }
                None => None,
            };
            let standardized = match &standardized {
                Some(g) => Some(pairing(cfg, g, phi)?.value),
                None => None,
            };
            Ok(Row {
                test: phi.label.clone(),
                result,
                reference,
                standardized,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut r = Report::new("pair", cfg.seed(), &columns);
    for row in &rows {
        let mut cells = vec![
            row.test.clone(),
            re(row.result.value),
            im(row.result.value),
            num(row.result.error_estimate),
            num(row.result.tail_bound),
        ];
        for z in [row.reference, row.standardized].into_iter().flatten() {
            cells.extend([re(z), im(z)]);
        }
        r.row(cells);
    }
    r.note(format!("input: {}", f.label));
    #[derive(Serialize)]
    struct Data<'a> {
        input: &'a str,
        rows: &'a [Row],
    }
    Ok(r.with_data(&Data {
        input: &f.label,
        rows: &rows,
    }))
}

fn moments_cmd(cfg: &JobConfig) -> Out {
    let f = source(cfg)?;
    let order = cfg.params.order.unwrap_or(4);
    let t = taylor_of_ft(&f, order, &cfg.spec())?;
    let mut r = Report::new(
        "moments",
        cfg.seed(),
        &["k", "moment_re", "moment_im", "transform_re", "transform_im", "discrepancy"],
    );
    for c in &t.checks {
        r.row(vec![
            c.k.to_string(),
            re(c.moment),
            im(c.moment),
            re(c.from_transform),
            im(c.from_transform),
            num(c.discrepancy),
        ]);
    }
    r.note(format!("input: {}; transform column is i^k f^(k)(0)", f.label));
    Ok(r.with_data(&t))
}

const REMAINDER_TOL: f64 = 1e-7;

fn expand_cmd(cfg: &JobConfig) -> Out {
    let f = source(cfg)?;
    let order = cfg.params.order.unwrap_or(2);
    let spec = cfg.spec();
    let s = asymptotic_sum(&f, order, &spec)?;
    let rem = remainder_moments(&f, &s, order, &spec)?;
    let mut r = Report::new(
        "expand",
        cfg.seed(),
        &["n", "coefficient_re", "coefficient_im", "moment_re", "moment_im", "remainder_moment"],
    );
    for n in 0..=order {
        r.row(vec![
            n.to_string(),
            re(s.coefficients[n]),
            im(s.coefficients[n]),
            re(s.moments[n]),
            im(s.moments[n]),
            num(rem[n].norm()),
        ]);
    }
    let worst = rem.iter().map(|m| m.norm()).fold(0.0, f64::max);
    r.note(format!(
        "{} ~ sum c_n delta^(n); largest remainder moment {} (tolerance {})",
        f.label,
        num(worst),
        num(REMAINDER_TOL)
    ));
    r.verdict = Verdict::from_bool(worst <= REMAINDER_TOL);
    #[derive(Serialize)]
    struct Data<'a> {
        sum: &'a hypercalc::spectral::AsymptoticSum,
        remainder_moments: &'a [Complex64],
    }
    Ok(r.with_data(&Data {
        sum: &s,
        remainder_moments: &rem,
    }))
}

fn param_check_cmd(cfg: &JobConfig) -> Out {
    let f = source(cfg)?;
    let phi = single_test(cfg, "gaussian")?;
    let order = cfg.params.order.unwrap_or(2);
    let lambdas = cfg.params.lambdas.clone().unwrap_or_else(|| vec![4.0, 8.0, 16.0, 32.0, 64.0]);
    let fit = parametric_order_check(&f, &phi, order, &lambdas, &cfg.spec())?;
    let mut r = Report::new("param-check", cfg.seed(), &["lambda", "residual", "noise_floor"]);
    for ((l, res), floor) in fit.lambdas.iter().zip(&fit.residuals).zip(&fit.noise_floor) {
        r.row(vec![num(*l), num(*res), num(*floor)]);
    }
    r.note(match fit.slope {
        Some(s) => format!("fitted slope {} against bound {}", num(s), num(fit.bound)),
        None => "every residual is below its noise floor (vacuous pass)".to_string(),
    });
    r.verdict = Verdict::from_bool(fit.pass);
    Ok(r.with_data(&fit))
}

fn fourier_cmd(cfg: &JobConfig) -> Out {
    let f = source(cfg)?;
    let xi = cfg.params.xi.clone().unwrap_or_else(|| vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    let g = fourier_transform(&f, &cfg.spec())?;
    let values = xi.iter().map(|&x| g.value(x)).collect::<hypercalc::Result<Vec<_>>>()?;
    let mut r = Report::new("fourier", cfg.seed(), &["xi", "re", "im"]);
    for (x, v) in xi.iter().zip(&values) {
        r.row(vec![num(*x), re(*v), im(*v)]);
    }
    r.note(format!("transform of {}", f.label));
    #[derive(Serialize)]
    struct Data<'a> {
        input: &'a str,
        xi: &'a [f64],
        values: &'a [Complex64],
    }
    Ok(r.with_data(&Data {
        input: &f.label,
        xi: &xi,
        values: &values,
    }))
}

fn invfourier_cmd(cfg: &JobConfig) -> Out {
    let spec = cfg.spec();
    let suite = tests(cfg)?;
    // either a field given in ξ (variable z), or the transform of an input
    let (field, original) = match &cfg.params.field {
        Some(text) => {
            let e = parse_expr(text).map_err(hypercalc::Error::from)?;
            let g = growth(cfg)?.ok_or_else(|| ConfigError::new("params.growth", "the spatial growth class is required with params.field"))?;
            let envelope = SpatialEnvelope {
                growth: g,
                constant: cfg.params.constant.unwrap_or(10.0),
                support_radius: None,
            };
            let field = SmoothField::from_expr(text.clone(), &e, GrowthClass::Asymptotic, hypercalc::spectral::DEFAULT_DERIVATIVE_CAP)
                .with_spatial(envelope);
            (field, None)
        }
        None => {
            let f = source(cfg)?;
            (fourier_transform(&f, &spec)?, Some(f))
        }
    };
    let back = inverse_fourier(&field, &InverseOptions::default(), &spec)?;
    let mut columns = vec!["test", "re", "im"];
    if original.is_some() {
        columns.extend(["original_re", "original_im", "relative"]);
    }
    let mut r = Report::new("invfourier", cfg.seed(), &columns);
    let mut worst: f64 = 0.0;
    #[derive(Serialize)]
    struct Row {
        test: String,
        value: Complex64,
        original: Option<Complex64>,
    }
    let mut rows = Vec::new();
    for phi in &suite {
        let v = pairing(cfg, &back, phi)?.value;
        let mut cells = vec![phi.label.clone(), re(v), im(v)];
        let mut orig = None;
        if let Some(f) = &original {
            let a = pairing(cfg, f, phi)?.value;
            let rel = (a - v).norm() / (1.0 + a.norm());
            worst = worst.max(rel);
            cells.extend([re(a), im(a), num(rel)]);
            orig = Some(a);
        }
        r.row(cells);
        rows.push(Row {
            test: phi.label.clone(),
            value: v,
            original: orig,
        });
    }
    if original.is_some() {
        r.note(format!("round trip; largest relative discrepancy {}", num(worst)));
        r.verdict = Verdict::from_bool(worst <= 1e-5);
    }
    Ok(r.with_data(&rows))
}

const REALIZE_TOL: f64 = 1e-6;

fn realize_cmd(cfg: &JobConfig) -> Out {
    let values = cfg
        .params
        .moments
        .clone()
        .ok_or_else(|| ConfigError::new("params.moments", "required"))?;
    let mut mu = MomentSequence::real(cfg.params.label.clone().unwrap_or_else(|| "moments".into()), &values);
    mu.bound = cfg.params.bound.map(|[m, r]| (m, r));
    let real = realize_moments(&mu)?;
    let mut r = Report::new(
        "realize",
        cfg.seed(),
        &["k", "target", "coefficient_re", "coefficient_im", "moment_re", "moment_im", "error"],
    );
    let mut worst: f64 = 0.0;
    let mut rows = Vec::new();
    for (k, want) in mu.values.iter().enumerate() {
        let got = moment(&real.hyperfunction, k, &cfg.spec())?;
        let err = (got - want).norm() / (1.0 + want.norm());
        worst = worst.max(err);
        let a = real.coefficients[k];
        r.row(vec![k.to_string(), num(want.re), re(a), im(a), re(got), im(got), num(err)]);
        rows.push((k, a, got, err));
    }
    r.note(format!(
        "f^(xi) = (sum a_k xi^k) exp(-xi^2); amplification {}",
        num(real.amplification)
    ));
    r.verdict = Verdict::from_bool(worst <= REALIZE_TOL);
    Ok(r.with_data(&rows))
}

fn weight(cfg: &JobConfig) -> WeightFunction {
    match (&cfg.params.weight_table, cfg.params.weight_power) {
        (Some(t), _) => WeightFunction::Table(t.clone()),
        (None, Some(p)) => WeightFunction::Power(p),
        (None, None) => WeightFunction::Power(0.5),
    }
}

/// Largest product length for which `J_K(D)` is applied symbolically.
const MAX_APPLIED_TERMS: usize = 3;

fn multiplier_cmd(cfg: &JobConfig) -> Out {
    let (m, report) = build_multiplier(weight(cfg), cfg.params.terms, &[])?;
    let mut r = Report::new(
        "multiplier",
        cfg.seed(),
        &["zeta_re", "zeta_im", "value_re", "value_im", "ratio", "in_region"],
    );
    for s in &report.samples {
        r.row(vec![
            re(s.zeta),
            im(s.zeta),
            re(s.value),
            im(s.value),
            num(s.ratio),
            s.in_region.to_string(),
        ]);
    }
    r.note(format!(
        "{} product terms; smallest |J| exp(-|zeta|/phi) in the region {}",
        report.terms,
        num(report.min_ratio_in_region)
    ));
    let has_input = cfg.params.label.is_some() || cfg.params.expr.is_some() || cfg.params.delta.is_some();
    let mut applied = Vec::new();
    if has_input {
        if m.terms > MAX_APPLIED_TERMS {
            return Err(ConfigError::new(
                "params.terms",
                format!("applying J_K to an input needs at most {MAX_APPLIED_TERMS} terms, got {}", m.terms),
            )
            .into());
        }
        let f = source(cfg)?;
        let jf = apply_local_operator(&m.to_operator(), &f)?;
        for phi in tests(cfg)? {
            let v = pairing(cfg, &jf, &phi)?.value;
            r.note(format!("<J(D) {}, {}> = {}", f.label, phi.label, complex(v)));
            applied.push((phi.label.clone(), v));
        }
    }
    #[derive(Serialize)]
    struct Data<'a> {
        report: &'a hypercalc::spectral::MultiplierReport,
        applied: &'a [(String, Complex64)],
    }
    Ok(r.with_data(&Data {
        report: &report,
        applied: &applied,
    }))
}

fn structural_cmd(cfg: &JobConfig) -> Out {
    let f = source(cfg)?;
    let spec = cfg.spec();
    let m = match cfg.params.terms {
        None => Multiplier::unit(),
        Some(k) => Multiplier::new(weight(cfg), k)?,
    };
    let rep = structural_representation(&f, &m, &StructuralOptions::default(), &spec)?;
    let mut r = Report::new("structural", cfg.seed(), &["x", "f0_re", "f0_im"]);
    for (x, v) in rep.xs.iter().zip(&rep.f0) {
        r.row(vec![num(*x), re(*v), im(*v)]);
    }
    let mut checks = Vec::new();
    let mut ok = true;
    for phi in tests(cfg)? {
        let c = rep.verify(&f, &phi, &spec)?;
        r.note(format!(
            "{}: grid {} vs contour {} (relative {})",
            phi.label,
            complex(c.grid_value),
            complex(c.direct_value),
            num(c.relative_error)
        ));
        ok &= c.pass;
        checks.push((phi.label.clone(), c));
    }
    r.note(format!("f = J(D)(1 - D^2) f0 with J = {}", rep.operator.label));
    r.verdict = Verdict::from_bool(ok);
    Ok(r.with_data(&checks))
}

// multidimensional commands

const TWO_ROUTE_TOL: f64 = 1e-5;

fn radon_cmd(cfg: &JobConfig) -> Out {
    let f = radon_source(cfg)?;
    let dirs = directions(cfg, f.dim(), 4)?;
    let suite = tests(cfg)?;
    let spec = cfg.spec();
    let route = cfg.params.route.as_deref().unwrap_or("both");
    let t_grid: &[f64] = cfg.params.t_grid.as_deref().unwrap_or(&[]);
    if !t_grid.is_empty() && route != "fourier" {
        return Err(ConfigError::new("params.t_grid", "point samples come from the Fourier route; add route fourier").into());
    }
    let opts = FourierRouteOptions::default();
    let mut r = Report::new(
        "radon",
        cfg.seed(),
        &["direction", "test", "direct_re", "direct_im", "fourier_re", "fourier_im", "relative"],
    );
    #[derive(Serialize)]
    struct Row {
        direction: Vec<f64>,
        test: String,
        direct: Option<Complex64>,
        fourier: Option<Complex64>,
    }
    #[derive(Serialize)]
    struct Sample {
        direction: Vec<f64>,
        t: f64,
        value: Complex64,
    }
    // directions fan out; rows are assembled in input order
    let per_dir = dirs
        .par_iter()
        .map(|w| -> Result<(Vec<Row>, Vec<Sample>), CliError> {
            match route {
                "both" => Ok((
                    two_route_check(&f, w, &suite, &opts, &spec)?
                        .into_iter()
                        .map(|d| Row {
                            direction: d.direction,
                            test: d.test,
                            direct: Some(d.direct),
                            fourier: Some(d.fourier),
                        })
                        .collect(),
                    Vec::new(),
                )),
                "direct" => {
                    let s = radon_transform(&f, w, &spec)?;
                    let rows = suite
                        .iter()
                        .map(|phi| {
                            Ok(Row {
                                direction: w.clone(),
                                test: phi.label.clone(),
                                direct: Some(s.pair(phi, &spec)?),
                                fourier: None,
                            })
                        })
                        .collect::<Result<_, CliError>>()?;
                    Ok((rows, Vec::new()))
                }
                _ => {
                    let s = radon_via_fourier(&f, w, t_grid, &opts, &spec)?;
                    let rows = suite
                        .iter()
                        .map(|phi| {
                            Ok(Row {
                                direction: w.clone(),
                                test: phi.label.clone(),
                                direct: None,
                                fourier: Some(s.pair(phi, &spec)?),
                            })
                        })
                        .collect::<Result<_, CliError>>()?;
                    let samples = s
                        .samples
                        .iter()
                        .map(|&(t, value)| Sample {
                            direction: w.clone(),
                            t,
                            value,
                        })
                        .collect();
                    Ok((rows, samples))
                }
            }
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let (rows, samples): (Vec<Vec<Row>>, Vec<Vec<Sample>>) = per_dir.into_iter().unzip();
    let rows: Vec<Row> = rows.into_iter().flatten().collect();
    let samples: Vec<Sample> = samples.into_iter().flatten().collect();
    let mut worst: f64 = 0.0;
    for row in &rows {
        let cell = |z: Option<Complex64>, part: fn(Complex64) -> String| z.map_or(String::new(), part);
        let rel = match (row.direct, row.fourier) {
            (Some(a), Some(b)) => {
                let v = (a - b).norm() / (1.0 + a.norm());
                worst = worst.max(v);
                num(v)
            }
            _ => String::new(),
        };
        r.row(vec![
            vector(&row.direction),
            row.test.clone(),
            cell(row.direct, re),
            cell(row.direct, im),
            cell(row.fourier, re),
            cell(row.fourier, im),
            rel,
        ]);
    }
    for s in &samples {
        r.note(format!("R f({}, {}) = {}", vector(&s.direction), num(s.t), complex(s.value)));
    }
    if route == "both" {
        r.note(format!("largest relative gap between the routes {}", num(worst)));
        r.verdict = Verdict::from_bool(worst <= TWO_ROUTE_TOL);
    }
    #[derive(Serialize)]
    struct Data<'a> {
        rows: &'a [Row],
        samples: &'a [Sample],
    }
    Ok(r.with_data(&Data {
        rows: &rows,
        samples: &samples,
    }))
}

fn helgason_cmd(cfg: &JobConfig) -> Out {
    let f = radon_source(cfg)?;
    let order = cfg.params.order.unwrap_or(4);
    let cap = cfg.params.k_cap.unwrap_or(DEFAULT_HELGASON_CAP);
    let ps = helgason_moments(&f, order, cap, cfg.seed(), &cfg.spec())?;
    let mut r = Report::new("helgason", cfg.seed(), &["k", "multi_index", "coefficient_re", "coefficient_im"]);
    let mut ok = true;
    for p in &ps {
        for (alpha, c) in &p.poly.coeffs {
            let idx: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
            r.row(vec![p.poly.degree.to_string(), idx.join("-"), re(*c), im(*c)]);
        }
        for ch in &p.checks {
            r.note(format!(
                "k = {} at {}: slice moment {} vs polynomial {}",
                p.poly.degree,
                vector(&ch.direction),
                complex(ch.direct),
                complex(ch.polynomial)
            ));
        }
        ok &= p.pass();
    }
    r.verdict = Verdict::from_bool(ok);
    Ok(r.with_data(&ps))
}

const RADON_REMAINDER_TOL: f64 = 1e-6;

fn radon_expand_cmd(cfg: &JobConfig) -> Out {
    let f = radon_source(cfg)?;
    let order = cfg.params.order.unwrap_or(4);
    let dirs = directions(cfg, f.dim(), 2)?;
    let out = radon_asymptotic_sum(&f, order, &dirs, &cfg.spec())?;
    let mut r = Report::new(
        "radon-expand",
        cfg.seed(),
        &["direction", "k", "coefficient_re", "coefficient_im", "remainder_moment"],
    );
    let mut worst: f64 = 0.0;
    for e in &out.expansions {
        for (k, (c, m)) in e.coefficients.iter().zip(&e.remainder_moments).enumerate() {
            r.row(vec![vector(&e.direction), k.to_string(), re(*c), im(*c), num(m.norm())]);
        }
        worst = worst.max(e.max_remainder());
    }
    if let MultiDimFunction::DeltaCombo(d) = &f {
        for k in 0..=order {
            let exact = point_expansion_exact(d, k)?;
            let terms: Vec<String> = exact
                .render()
                .into_iter()
                .map(|(a, c)| {
                    let idx: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                    format!("({c}) w^[{}]", idx.join(","))
                })
                .collect();
            r.note(format!("exact coefficient of delta^({k}): {}", if terms.is_empty() { "0".into() } else { terms.join(" + ") }));
        }
    }
    r.note(format!("largest remainder moment {} (tolerance {})", num(worst), num(RADON_REMAINDER_TOL)));
    r.verdict = Verdict::from_bool(worst <= RADON_REMAINDER_TOL);
    Ok(r.with_data(&out))
}

fn gevrey_cmd(cfg: &JobConfig) -> Out {
    let f = radon_source(cfg)?;
    let omega = directions(cfg, f.dim(), 1)?.remove(0);
    let [tr, ti] = cfg.params.tau.unwrap_or([0.0, 2.0]);
    let max_order = cfg.params.order.unwrap_or(4);
    let fit = gevrey_probe(&f, &omega, Complex64::new(tr, ti), max_order, &cfg.spec())?;
    let mut r = Report::new("gevrey", cfg.seed(), &["order", "value", "noise", "included", "envelope"]);
    for o in &fit.orders {
        r.row(vec![o.order.to_string(), num(o.value), num(o.noise), o.included.to_string(), num(o.envelope)]);
    }
    r.note(format!(
        "direction {}, tangent {}, envelope C (m!)^2 / v^m with C = {}, v = {}",
        vector(&fit.direction),
        vector(&fit.tangent),
        num(fit.constant),
        num(fit.rate)
    ));
    if fit.noise_dominated {
        r.note("fewer than two orders rose above the noise");
    }
    r.verdict = Verdict::from_bool(fit.pass);
    Ok(r.with_data(&fit))
}

fn support_check_cmd(cfg: &JobConfig) -> Out {
    let p = &cfg.params;
    let mut opts = SupportOptions::new(p.half_width.unwrap_or(1.0));
    if let Some(eps) = &p.eps {
        opts.eps = eps.clone();
    }
    if let Some(q) = p.q_max {
        opts.q_max = q;
    }
    opts.complete = p.complete.unwrap_or(false);
    let reports = match &p.moments {
        Some(values) => {
            let mut mu = MomentSequence::real(p.label.clone().unwrap_or_else(|| "moments".into()), values);
            mu.bound = p.bound.map(|[m, r]| (m, r));
            vec![support_check(&mu, &opts)?]
        }
        None => match radon_source(cfg)? {
            MultiDimFunction::DeltaCombo(d) => {
                let dirs = directions(cfg, d.dim, 4)?;
                support_check_slices(&d, &dirs, &opts)?
            }
            other => {
                return Err(ConfigError::new(
                    "params.label",
                    format!("`{}` has no closed-form moments; give params.moments instead", other.label()),
                )
                .into())
            }
        },
    };
    let mut r = Report::new("support-check", cfg.seed(), &["label", "q", "value_re", "value_im", "tail"]);
    let mut ok = true;
    for rep in &reports {
        for s in &rep.samples {
            r.row(vec![rep.label.clone(), s.q.to_string(), re(s.value), im(s.value), num(s.tail)]);
        }
        let verdicts: Vec<String> = rep
            .verdicts
            .iter()
            .map(|v| format!("eps {} {}", num(v.eps), if v.pass { "pass" } else { "fail" }))
            .collect();
        r.note(format!(
            "{} S = {}: rate {}, power {}, certified {}; {}{}",
            rep.label,
            num(rep.half_width),
            num(rep.fitted_rate),
            num(rep.fitted_power),
            rep.certified,
            verdicts.join(", "),
            rep.diagnosis.as_ref().map_or(String::new(), |d| format!("; {d}"))
        ));
        ok &= rep.pass();
    }
    r.verdict = Verdict::from_bool(ok);
    Ok(r.with_data(&reports))
}

const ODE_RESIDUAL_TOL: f64 = 1e-7;

fn ode_solve_cmd(cfg: &JobConfig) -> Out {
    let p = &cfg.params;
    let l = match &p.op {
        Some(text) => PolyCoeffOperator::parse(text)?,
        None => PolyCoeffOperator::example(),
    };
    let kind: TailKind = p.basis.as_deref().unwrap_or("delta").parse()?;
    let init = parse_coefficient(p.init.as_deref().unwrap_or("1"))?;
    let order = p.order.unwrap_or(10);
    let sol = solve_series(&l, kind, init, order)?;
    let mut r = Report::new("ode-solve", cfg.seed(), &["n", "exact", "re", "im"]);
    for (n, c) in sol.coefficients.iter().enumerate() {
        let z = to_complex64(c);
        r.row(vec![n.to_string(), render_complex(c), re(z), im(z)]);
    }
    let basis = match kind {
        TailKind::Delta => "delta^(n)",
        TailKind::FinitePart => "f.p. t^-(n+1)",
    };
    r.note(format!("L = {}; coefficients of {basis}", sol.operator));
    if !sol.free.is_empty() {
        let free: Vec<String> = sol.free.iter().map(|i| i.to_string()).collect();
        r.note(format!("free indices set to zero: {}", free.join(", ")));
    }
    let adm = &sol.admissibility;
    r.note(format!(
        "root test: decreasing {}, decay power {}, {}",
        adm.decreasing,
        num(adm.decay_power),
        if adm.pass { "admissible" } else { "not admissible" }
    ));
    // L applied to the truncated tail: only truncation-edge terms survive
    let tail = match kind {
        TailKind::FinitePart => compensate_constant(&l, &sol).unwrap_or_else(|_| sol.tail.clone()),
        TailKind::Delta => sol.tail.clone(),
    };
    let pad = l.terms.iter().map(|t| t.shift().max(0) as usize).max().unwrap_or(0);
    let image = apply_operator(&l, &tail.padded(pad))?;
    let first_nonzero = image.coeffs.iter().enumerate().skip(1).find(|(_, c)| to_complex64(c).norm() != 0.0).map(|(n, _)| n);
    r.note(match first_nonzero {
        Some(n) => format!("L G vanishes below tau^-{n}"),
        None => "L G vanishes identically".to_string(),
    });
    let assembled = assemble(&tail);
    if let Some(cf) = &assembled.closed_form {
        r.note(format!("closed form: {cf}"));
    }
    let mut residual = None;
    if assembled.formal_only {
        r.note("formal series only; no defining function assembled");
    } else {
        let rep = residual_check(&assembled.hyper, &l, &tests(cfg)?, &cfg.spec())?;
        r.note(format!("max |<L f, phi>| on the suite {}", num(rep.max_residual)));
        residual = Some(rep);
    }
    r.verdict = Verdict::from_bool(adm.pass && residual.as_ref().map_or(true, |x| x.max_residual <= ODE_RESIDUAL_TOL));
    #[derive(Serialize)]
    struct Data<'a> {
        operator: &'a str,
        basis: &'a str,
        coefficients: Vec<String>,
        free: &'a [usize],
        admissibility: &'a hypercalc::odeseries::Admissibility,
        closed_form: Option<&'a str>,
        residual: Option<hypercalc::odeseries::ResidualReport>,
    }
    Ok(r.with_data(&Data {
        operator: &sol.operator,
        basis: kind.name(),
        coefficients: sol.coefficients.iter().map(render_complex).collect(),
        free: &sol.free,
        admissibility: adm,
        closed_form: assembled.closed_form.as_deref(),
        residual,
    }))
}

// verify-all

fn verify_all_cmd(cfg: &JobConfig) -> Out {
    let ids: Vec<u32> = cfg
        .params
        .only
        .clone()
        .unwrap_or_else(|| (1..=acceptance::CRITERIA).collect());
    let seed = cfg.seed();
    // criteria fan out; the report keeps their order
    let results: Vec<acceptance::CriterionResult> = ids.par_iter().map(|&id| acceptance::run(id, seed)).collect();
    let mut r = Report::new("verify-all", seed, &["id", "criterion", "result", "checks"]);
    for c in &results {
        let checks: Vec<String> = c
            .checks
            .iter()
            .map(|k| format!("{} {} {} {}", k.name, num(k.measured), if k.pass { "<=" } else { ">" }, num(k.tolerance)))
            .collect();
        r.row(vec![
            c.id.to_string(),
            c.name.clone(),
            if c.pass { "pass".into() } else { "FAIL".into() },
            checks.join("; "),
        ]);
        if !c.detail.is_empty() {
            r.note(format!("{}: {}", c.id, c.detail));
        }
    }
    r.verdict = Verdict::from_bool(results.iter().all(|c| c.pass));
    Ok(r.with_data(&results))
}

