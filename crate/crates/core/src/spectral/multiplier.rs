use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{fourier_transform, inverse_fourier, InverseOptions, SmoothField, SpatialEnvelope};
use crate::expr::{Expr, GrowthClass};
use crate::hyper::{pair, Hyperfunction1D, LocalOperator, TestFunction};
use crate::quad::{integrate_interval, kronrod_rule, Adaptive, ContourSpec};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The weight `φ` in `J(ζ) = Π(1 + ζ²/(kφ(k))²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightFunction {
    /// `φ(t) = t^p`.
    Power(f64),
    /// `φ(1), φ(2), …`; linearly interpolated between integers.
    Table(Vec<f64>),
}

impl WeightFunction {
    pub fn validate(&self) -> Result<()> {
        match self {
            WeightFunction::Power(p) if *p > 0.0 && p.is_finite() => Ok(()),
            WeightFunction::Power(p) => Err(Error::InvalidArgument(format!(
                "weight exponent must be positive, got {p}"
            ))),
            WeightFunction::Table(t) => {
                if t.is_empty() {
                    return Err(Error::InvalidArgument("empty weight table".into()));
                }
                if let Some(v) = t.iter().find(|v| !(v.is_finite() && **v >= 1.0)) {
                    return Err(Error::InvalidArgument(format!("weight value {v} is below 1")));
                }
                if let Some(k) = t.windows(2).position(|w| w[1] <= w[0]) {
                    return Err(Error::InvalidArgument(format!(
                        "weight table is not increasing at k = {}: {} then {}",
                        k + 1,
                        t[k],
                        t[k + 1]
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn at(&self, t: f64) -> f64 {
        match self {
            WeightFunction::Power(p) => t.max(1.0).powf(*p),
            WeightFunction::Table(v) => {
                let n = v.len();
                if t <= 1.0 || n == 1 {
                    return v[0];
                }
                let k = (t.floor() as usize).min(n - 1).max(1);
                let (a, b) = if k < n { (v[k - 1], v[k]) } else { (v[n - 2], v[n - 1]) };
                a + (b - a) * (t - k as f64)
            }
        }
    }

    fn table_len(&self) -> Option<usize> {
        match self {
            WeightFunction::Power(_) => None,
            WeightFunction::Table(v) => Some(v.len()),
        }
    }
}

/// Upper limit on the number of product terms.
pub const MAX_MULTIPLIER_TERMS: usize = 10_000_000;

/// The truncated product `J_K(ζ) = Π_{k≤K}(1 + ζ²/(kφ(k))²)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Multiplier {
    pub weight: WeightFunction,
    pub terms: usize,
    scales: Vec<f64>,
}

impl Multiplier {
    pub fn new(weight: WeightFunction, terms: usize) -> Result<Self> {
        weight.validate()?;
        if let Some(n) = weight.table_len() {
            if terms > n {
                return Err(Error::InvalidArgument(format!(
                    "{terms} product terms requested but the weight table has {n} entries"
                )));
            }
        }
        if terms > MAX_MULTIPLIER_TERMS {
            return Err(Error::InvalidArgument(format!(
                "{terms} product terms exceed the limit {MAX_MULTIPLIER_TERMS}"
            )));
        }
        let scales = (1..=terms)
            .map(|k| {
                let a = k as f64 * weight.at(k as f64);
                1.0 / (a * a)
            })
            .collect();
        Ok(Multiplier { weight, terms, scales })
    }

    /// The empty product, `J ≡ 1`.
    pub fn unit() -> Self {
        Multiplier {
            weight: WeightFunction::Power(1.0),
            terms: 0,
            scales: Vec::new(),
        }
    }

    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        let z2 = zeta * zeta;
        self.scales.iter().fold(Complex64::new(1.0, 0.0), |acc, s| acc * (1.0 + z2 * s))
    }

    /// Elementary symmetric sums `e_0..e_m` of `1/(kφ(k))²`, so that
    /// `J(ζ) = Σ e_m ζ^{2m}`.
    pub fn even_coefficients(&self, max_m: usize) -> Vec<f64> {
        let mut e = vec![0.0; max_m + 1];
        e[0] = 1.0;
        for s in &self.scales {
            for m in (1..=max_m).rev() {
                e[m] += e[m - 1] * s;
            }
        }
        e
    }

    /// `J(D)` with `b_{2m} = (−1)^m e_m`. Exact (finite order) when the
    /// product has at most 30 factors; otherwise an infinite-order operator
    /// whose coefficients are kept up to degree 120.
    pub fn to_operator(&self) -> LocalOperator {
        const EXACT: usize = 30;
        const KEPT: usize = 60;
        let m = if self.terms <= EXACT { self.terms } else { KEPT };
        let e = self.even_coefficients(m);
        let mut b = vec![Complex64::new(0.0, 0.0); 2 * m + 1];
        for (j, v) in e.iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            b[2 * j] = Complex64::new(sign * v, 0.0);
        }
        let label = format!("J[{}]", self.terms);
        if self.terms <= EXACT {
            LocalOperator::finite(label, b)
        } else {
            LocalOperator::infinite(label, b, |_| Complex64::new(0.0, 0.0))
        }
    }
}

/// First `k` at which `|ζ|²/(kφ(k))² < 1e−16`, the default truncation.
pub fn default_terms(weight: &WeightFunction, max_abs_zeta: f64) -> usize {
    let z2 = max_abs_zeta * max_abs_zeta;
    if let WeightFunction::Power(p) = weight {
        // k^{2(1+p)} > 1e16 |ζ|² has a closed-form first solution
        let k0 = (1e8 * max_abs_zeta).powf(1.0 / (1.0 + p)).floor().max(1.0) as usize;
        let mut k = k0.saturating_sub(2).max(1);
        while k < MAX_MULTIPLIER_TERMS && z2 / (k as f64 * weight.at(k as f64)).powi(2) >= 1e-16 {
            k += 1;
        }
        return k;
    }
    let n = weight.table_len().unwrap_or(1);
    (1..=n)
        .find(|&k| z2 / (k as f64 * weight.at(k as f64)).powi(2) < 1e-16)
        .unwrap_or(n)
}

/// One sampled point of the lower-bound report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierSample {
    pub zeta: Complex64,
    pub value: Complex64,
    /// `|J(ζ)|·exp(−|ζ|/φ(|ζ|+1))`.
    pub ratio: f64,
    /// `|Im ζ| ≤ max(|Re ζ|/√3, 1)`.
    pub in_region: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub terms: usize,
    pub samples: Vec<MultiplierSample>,
    pub min_ratio_in_region: f64,
    /// Points where `J` is real and negative.
    pub sign_flips: Vec<Complex64>,
}

fn in_region(z: Complex64) -> bool {
    z.im.abs() <= (z.re.abs() / 3f64.sqrt()).max(1.0)
}

fn ray_set() -> Vec<Complex64> {
    let mut out = Vec::new();
    for r in [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        for deg in [0.0, 10.0, 20.0, 30.0, 45.0, 60.0, 90.0] {
            let t: f64 = deg * PI / 180.0;
            for z in [Complex64::from_polar(r, t), Complex64::from_polar(r, PI - t)] {
                if in_region(z) {
                    out.push(z);
                }
            }
        }
    }
    out
}

/// Builds `J_K` and samples the lower bound on the ray set together with the
/// caller's points. `terms = None` picks [`default_terms`] for the largest
/// requested `|ζ|`.
pub fn build_multiplier(
    weight: WeightFunction,
    terms: Option<usize>,
    zetas: &[Complex64],
) -> Result<(Multiplier, MultiplierReport)> {
    weight.validate()?;
    let max_abs = zetas.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let k = match terms {
        Some(0) => return Err(Error::InvalidArgument("at least one product term is required".into())),
        Some(k) => k,
        None => default_terms(&weight, max_abs),
    };
    let m = Multiplier::new(weight, k)?;
    let mut points = ray_set();
    points.extend_from_slice(zetas);
    let samples: Vec<MultiplierSample> = points
        .iter()
        .map(|&z| {
            let value = m.eval(z);
            let ratio = value.norm() * (-z.norm() / m.weight.at(z.norm() + 1.0)).exp();
            MultiplierSample {
                zeta: z,
                value,
                ratio,
                in_region: in_region(z),
            }
        })
        .collect();
    let min_ratio_in_region = samples
        .iter()
        .filter(|s| s.in_region)
        .map(|s| s.ratio)
        .fold(f64::INFINITY, f64::min);
    let sign_flips = samples
        .iter()
        .filter(|s| s.value.re < 0.0 && s.value.im.abs() <= 1e-12 * s.value.norm())
        .map(|s| s.zeta)
        .collect();
    Ok((
        m,
        MultiplierReport {
            terms: k,
            samples,
            min_ratio_in_region,
            sign_flips,
        },
    ))
}

fn symbol_derivative(j: &LocalOperator, k: usize, xi: f64) -> Complex64 {
    // d^k/dξ^k Σ b_n (iξ)^n = Σ_{n≥k} b_n iⁿ n!/(n−k)! ξ^{n−k}
    let limit = j.order().map_or(2000, |n| n + 1);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut quiet = 0;
    for n in k..limit {
        let falling: f64 = ((n - k + 1)..=n).map(|v| v as f64).product();
        let term = j.coefficient(n) * I.powu(n as u32) * falling * xi.powi((n - k) as i32);
        sum += term;
        if j.order().is_none() && n > j.coefficients.len() {
            if term.norm() <= 1e-17 * sum.norm().max(1e-300) {
                quiet += 1;
                if quiet >= 8 {
                    break;
                }
            } else {
                quiet = 0;
            }
        }
    }
    sum
}

/// `J(D)f` for an infinite-order `J` as the Fourier multiplier `J(ξ)f̂(ξ)`.
pub fn apply_multiplier(j: &LocalOperator, f: &Hyperfunction1D) -> Result<Hyperfunction1D> {
    f.require_asymptotic()?;
    let spec = ContourSpec::default();
    let fhat = fourier_transform(f, &spec)?;
    let op = j.clone();
    let symbol = SmoothField::from_fn(
        format!("symbol[{}]", j.label),
        GrowthClass::InfraExponential,
        fhat.derivative_order_cap,
        move |xi, k| Ok(symbol_derivative(&op, k, xi)),
    );
    let mut factor = 0.0;
    let mut fact = 1.0;
    for n in 0..200 {
        if n > 0 {
            fact *= n as f64;
        }
        let b = j.coefficient(n).norm();
        if b == 0.0 {
            continue;
        }
        let term = b * fact;
        if !term.is_finite() {
            break;
        }
        factor += term;
    }
    let envelope = SpatialEnvelope {
        constant: f.constant * factor,
        ..SpatialEnvelope::of(f)
    };
    let g = fhat.product(&symbol, format!("{}·F[{}]", j.label, f.label));
    let opts = InverseOptions {
        spatial: Some(envelope),
        ..InverseOptions::default()
    };
    let out = inverse_fourier(&g, &opts, &spec)?;
    Ok(out.with_label(format!("{}({})", j.label, f.label)))
}

/// Grid used by [`structural_representation`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuralOptions {
    /// `f₀` is sampled on `[−x_max, x_max]`.
    pub x_max: f64,
    pub x_step: f64,
    /// Frequency cutoff of the inverse transform.
    pub xi_max: f64,
    pub xi_panel: f64,
}

impl Default for StructuralOptions {
    fn default() -> Self {
        StructuralOptions {
            x_max: 30.0,
            x_step: 0.05,
            xi_max: 60.0,
            xi_panel: 0.15,
        }
    }
}

/// `∫_0^∞ h(±ξ) e^{±ixξ} dξ` on a frozen grid with a power-law tail
/// `h(ξ) ≈ h(Ξ)(Ξ/ξ)^p` beyond the cutoff.
struct RealHalfLine {
    nodes: Vec<f64>,
    weighted: Vec<Complex64>,
    end: f64,
    end_value: Complex64,
    exponent: f64,
}

impl RealHalfLine {
    fn build(h: &SmoothField, sign: f64, opts: &StructuralOptions, tol: f64) -> Result<RealHalfLine> {
        let mut nodes = Vec::new();
        let mut weighted = Vec::new();
        let mut a = 0.0;
        let mut quiet = 0;
        while a < opts.xi_max && quiet < 4 {
            let b = (a + opts.xi_panel).min(opts.xi_max);
            let mut size = 0.0;
            for (x, w) in kronrod_rule(a, b) {
                let v = h.value(sign * x)?;
                size += v.norm();
                nodes.push(x);
                weighted.push(w * v);
            }
            quiet = if size < 1e-3 * tol { quiet + 1 } else { 0 };
            a = b;
        }
        let end_value = h.value(sign * a)?;
        let mut exponent = f64::INFINITY;
        if end_value.norm() >= 1e-3 * tol {
            let slope = sign * h.derivative(1, sign * a)? / end_value;
            exponent = -a * slope.re;
            if exponent <= 1.05 {
                return Err(Error::Domination(format!(
                    "`{}` decays like |ξ|^-{exponent:.3} at the cutoff {a}; not integrable",
                    h.label
                )));
            }
        }
        Ok(RealHalfLine {
            nodes,
            weighted,
            end: a,
            end_value,
            exponent,
        })
    }

    fn eval(&self, x: f64) -> Result<Complex64> {
        let mut s: Complex64 = self
            .nodes
            .iter()
            .zip(&self.weighted)
            .map(|(&u, &v)| v * Complex64::new(0.0, x * u).exp())
            .sum();
        if self.exponent.is_finite() {
            s += self.end_value * self.end.powf(self.exponent) * power_tail(self.exponent, self.end, x)?;
        }
        Ok(s)
    }
}

/// `∫_Ξ^∞ ξ^{−p} e^{ixξ} dξ`, rotated onto `ξ = Ξ + i·sgn(x)·u`.
fn power_tail(p: f64, end: f64, x: f64) -> Result<Complex64> {
    if x == 0.0 {
        return Ok(Complex64::new(end.powf(1.0 - p) / (p - 1.0), 0.0));
    }
    let s = x.signum();
    let opts = Adaptive {
        abs_tol: 1e-14 * end.powf(1.0 - p),
        max_subdivisions: 2000,
        max_panel: f64::INFINITY,
    };
    let q = integrate_interval(
        |t| {
            let u = end * t / (1.0 - t);
            let du = end / ((1.0 - t) * (1.0 - t));
            let xi = Complex64::new(end, s * u);
            Ok(xi.powf(-p) * (-x.abs() * u).exp() * du)
        },
        0.0,
        1.0,
        opts,
    )?;
    Ok(I * s * Complex64::new(0.0, x * end).exp() * q.value)
}

/// `f = J(D)(1 − D²) f₀` with `f₀` continuous, sampled on a grid.
#[derive(Clone, Debug)]
pub struct StructuralRepresentation {
    pub operator: LocalOperator,
    pub xs: Vec<f64>,
    pub f0: Vec<Complex64>,
    pub xi_cutoff: f64,
    /// Fitted decay exponents of `f̂₀` at `±` the cutoff (`inf` when
    /// negligible there).
    pub tail_exponents: (f64, f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuralCheck {
    pub grid_value: Complex64,
    pub direct_value: Complex64,
    pub relative_error: f64,
    pub pass: bool,
}

/// Tolerance of the reconstruction check.
pub const STRUCTURAL_TOLERANCE: f64 = 1e-4;

impl StructuralRepresentation {
    /// `Σ w_j f₀(x_j) ψ(x_j)` with `ψ = J*(D)(1 − D²)φ`, Simpson weights.
    pub fn grid_pair(&self, phi: &TestFunction) -> Result<Complex64> {
        let damp = LocalOperator::from_real("1-D^2", &[1.0, 0.0, -1.0]);
        let psi = self.operator.adjoint().apply_test(&damp.apply_test(phi)?)?;
        let h = self.xs[1] - self.xs[0];
        let n = self.xs.len() - 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, (&x, &v)) in self.xs.iter().zip(&self.f0).enumerate() {
            let w = if j == 0 || j == n {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += w * v * psi.eval(Complex64::new(x, 0.0))?;
        }
        Ok(acc * h / 3.0)
    }

    pub fn verify(&self, f: &Hyperfunction1D, phi: &TestFunction, spec: &ContourSpec) -> Result<StructuralCheck> {
        let grid_value = self.grid_pair(phi)?;
        let direct_value = pair(f, phi, spec)?.value;
        let relative_error = (grid_value - direct_value).norm() / direct_value.norm().max(1e-300);
        Ok(StructuralCheck {
            grid_value,
            direct_value,
            relative_error,
            pass: relative_error <= STRUCTURAL_TOLERANCE,
        })
    }
}

/// Writes an asymptotic `f` as `J(D)(1 − D²)f₀` with
/// `f̂₀ = f̂/(J(ξ)(1+ξ²))`, for a finite truncation `J` of the product.
pub fn structural_representation(
    f: &Hyperfunction1D,
    multiplier: &Multiplier,
    opts: &StructuralOptions,
    spec: &ContourSpec,
) -> Result<StructuralRepresentation> {
    f.require_asymptotic()?;
    let operator = multiplier.to_operator();
    if operator.order().is_none() {
        return Err(Error::InvalidArgument(format!(
            "structural representation needs a finite truncation; `{}` has {} factors",
            operator.label, multiplier.terms
        )));
    }
    let steps = (opts.x_max / opts.x_step).round() as usize;
    if steps == 0 || !(opts.xi_max > 0.0 && opts.xi_panel > 0.0) {
        return Err(Error::InvalidArgument(format!("bad structural grid {opts:?}")));
    }
    // 1/(J(ξ)(1+ξ²)) as an expression, so its derivatives are symbolic
    let e = multiplier.even_coefficients(multiplier.terms);
    let mut poly = Expr::zero();
    for (m, v) in e.iter().enumerate() {
        let base = Expr::powi(Expr::z(), 2 * m as i32);
        poly = Expr::add(poly, Expr::mul(Expr::real(*v), base));
    }
    let denom = Expr::mul(poly, Expr::add(Expr::one(), Expr::powi(Expr::z(), 2)));
    let inverse_symbol = SmoothField::from_expr("1/(J(1+z^2))", &Expr::div(Expr::one(), denom), GrowthClass::Asymptotic, 2);
    let fhat = fourier_transform(f, spec)?;
    let f0hat = fhat.product(&inverse_symbol, format!("F[{}]/(J(1+z^2))", f.label));

    // |f̂/J| must stay bounded; probed at a loose tolerance before the grid
    let coarse = fourier_transform(f, &spec.with_tol(1e-6))?;
    let near = (0..=10)
        .map(|j| Ok(coarse.value(0.1 * j as f64)?.norm() / multiplier.eval(Complex64::new(0.1 * j as f64, 0.0)).norm()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    for xi in [0.25, 0.5, 1.0].iter().flat_map(|t| [t * opts.xi_max, -t * opts.xi_max]) {
        let far = coarse.value(xi)?.norm() / multiplier.eval(Complex64::new(xi, 0.0)).norm();
        if far > 10.0 * near + 1e-6 {
            return Err(Error::Domination(format!(
                "|F[{}]/J| is {far:.3e} at ξ = {xi} against {near:.3e} near 0",
                f.label
            )));
        }
    }

    let tol = spec.abs_tol.max(1e-12);
    let plus = RealHalfLine::build(&f0hat, 1.0, opts, tol)?;
    let minus = RealHalfLine::build(&f0hat, -1.0, opts, tol)?;

    let xs: Vec<f64> = (0..=2 * steps)
        .map(|j| -opts.x_max + j as f64 * opts.x_step)
        .collect();
    let f0 = xs
        .iter()
        .map(|&x| Ok((plus.eval(x)? + minus.eval(-x)?) / (2.0 * PI)))
        .collect::<Result<Vec<_>>>()?;
    Ok(StructuralRepresentation {
        operator,
        xs,
        f0,
        xi_cutoff: plus.end.max(minus.end),
        tail_exponents: (plus.exponent, minus.exponent),
    })
}
