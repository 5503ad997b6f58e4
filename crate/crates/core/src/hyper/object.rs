use std::f64::consts::PI;

use num_complex::Complex64;

use super::defining::DefiningFunction;
use crate::expr::{differentiate, parse_expr, Expr, GrowthClass};
use crate::quad::verify_growth;
use crate::{Error, Result};

/// Envelope constant assumed when an object does not declare one.
pub const DEFAULT_ENVELOPE_CONSTANT: f64 = 10.0;

/// Radii used by the growth spot check on construction.
pub const GROWTH_SAMPLE_RADII: [f64; 3] = [5.0, 10.0, 20.0];

/// A hyperfunction on ℝ, `f(x) = F₊(x + i0) − F₋(x − i0)`.
///
/// `growth` and `constant` describe the boundary value on the real axis:
/// `|f(x)| <= constant * envelope(x)` for large `|x|`. When `support_radius`
/// is set, `f` vanishes on `|x| > support_radius` and the class only matters
/// for bookkeeping.
#[derive(Clone, Debug)]
pub struct Hyperfunction1D {
    pub label: String,
    pub f_plus: DefiningFunction,
    pub f_minus: DefiningFunction,
    pub strip_plus: f64,
    pub strip_minus: f64,
    pub growth: GrowthClass,
    pub constant: f64,
    pub support_radius: Option<f64>,
}

impl Hyperfunction1D {
    pub fn new(
        label: impl Into<String>,
        f_plus: impl Into<DefiningFunction>,
        f_minus: impl Into<DefiningFunction>,
        strips: (f64, f64),
        growth: GrowthClass,
    ) -> Self {
        Hyperfunction1D {
            label: label.into(),
            f_plus: f_plus.into(),
            f_minus: f_minus.into(),
            strip_plus: strips.0,
            strip_minus: strips.1,
            growth,
            constant: DEFAULT_ENVELOPE_CONSTANT,
            support_radius: None,
        }
    }

    pub fn with_constant(mut self, constant: f64) -> Self {
        self.constant = constant;
        self
    }

    pub fn with_support(mut self, radius: f64) -> Self {
        self.support_radius = Some(radius);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn zero() -> Self {
        Hyperfunction1D::new(
            "0",
            DefiningFunction::zero(),
            DefiningFunction::zero(),
            (f64::INFINITY, f64::INFINITY),
            GrowthClass::Asymptotic,
        )
        .with_constant(0.0)
        .with_support(0.0)
    }

    /// Moments of every order exist.
    pub fn is_asymptotic(&self) -> bool {
        self.support_radius.is_some() || self.growth.is_asymptotic()
    }

    pub(crate) fn require_asymptotic(&self) -> Result<()> {
        if self.is_asymptotic() {
            Ok(())
        } else {
            Err(Error::NotAsymptotic {
                label: self.label.clone(),
                class: self.growth.to_string(),
            })
        }
    }

    pub fn min_strip(&self) -> f64 {
        self.strip_plus.min(self.strip_minus)
    }

    pub fn is_symbolic(&self) -> bool {
        self.f_plus.is_symbolic() && self.f_minus.is_symbolic()
    }

    /// `Σ c_k f_k`. Strips shrink to the narrowest; compactly supported terms
    /// do not affect the tail class.
    pub fn linear_combination(label: impl Into<String>, terms: &[(Complex64, &Hyperfunction1D)]) -> Self {
        let live: Vec<_> = terms.iter().filter(|(c, _)| c.norm() != 0.0).collect();
        let mut out = Hyperfunction1D::zero().with_label(label);
        out.f_plus = DefiningFunction::combine(live.iter().map(|(c, f)| (*c, f.f_plus.clone())).collect());
        out.f_minus = DefiningFunction::combine(live.iter().map(|(c, f)| (*c, f.f_minus.clone())).collect());
        let mut growth: Option<GrowthClass> = None;
        let mut constant = 0.0;
        let mut support: Option<f64> = Some(0.0);
        for (c, f) in &live {
            out.strip_plus = out.strip_plus.min(f.strip_plus);
            out.strip_minus = out.strip_minus.min(f.strip_minus);
            match (support, f.support_radius) {
                (Some(a), Some(b)) => support = Some(a.max(b)),
                _ => support = None,
            }
            if f.support_radius.is_none() {
                growth = Some(growth.map_or(f.growth, |g| g.weakest(f.growth)));
                constant += c.norm() * f.constant;
            }
        }
        if let Some(g) = growth {
            out.growth = g;
            out.constant = constant;
        }
        out.support_radius = support;
        if !out.strip_plus.is_finite() {
            out.strip_plus = 1.0;
        }
        if !out.strip_minus.is_finite() {
            out.strip_minus = 1.0;
        }
        out
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = Hyperfunction1D::linear_combination(self.label.clone(), &[(c, self)]);
        out.strip_plus = self.strip_plus;
        out.strip_minus = self.strip_minus;
        out.growth = self.growth;
        out
    }

    pub fn sub(&self, other: &Hyperfunction1D) -> Self {
        Hyperfunction1D::linear_combination(
            format!("{} - {}", self.label, other.label),
            &[(Complex64::new(1.0, 0.0), self), (Complex64::new(-1.0, 0.0), other)],
        )
    }

    /// `F₊(x + iε) − F₋(x − iε)`.
    pub fn boundary_value(&self, x: f64, eps: f64) -> Result<Complex64> {
        Ok(self.f_plus.eval(Complex64::new(x, eps))? - self.f_minus.eval(Complex64::new(x, -eps))?)
    }
}

/// Embeds a real-analytic function as `F₊ = e`, `F₋ = 0`.
///
/// `e` must be analytic on `|Im z| < strip`; the declared class is
/// spot-checked on the real axis.
pub fn embed_real_analytic(
    label: impl Into<String>,
    e: Expr,
    strip: f64,
    growth: GrowthClass,
    constant: f64,
) -> Result<Hyperfunction1D> {
    let label = label.into();
    let report = verify_growth(&e, growth, &GROWTH_SAMPLE_RADII);
    if !report.pass {
        return Err(Error::Growth(format!(
            "`{label}` = {e} exceeds the {growth} envelope at x = {}",
            report.first_violation.unwrap_or(f64::NAN)
        )));
    }
    Ok(Hyperfunction1D::new(label, e, Expr::zero(), (strip, strip), growth).with_constant(constant))
}

/// `δ⁽ⁿ⁾` with `F₊ = F₋ = (−1/2πi)(−1)ⁿ n!/z^{n+1}`.
pub fn delta_derivative(n: usize) -> Hyperfunction1D {
    let n_fact: f64 = (1..=n).map(|k| k as f64).product();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let c = Complex64::new(0.0, 1.0) * (sign * n_fact / (2.0 * PI));
    // −1/(2πi) = i/(2π)
    let e = Expr::mul(Expr::Const(c), Expr::powi(Expr::z(), -(n as i32 + 1)));
    let label = match n {
        0 => "delta".to_string(),
        _ => format!("delta{n}"),
    };
    Hyperfunction1D::new(label, e.clone(), e, (4.0, 4.0), GrowthClass::Asymptotic)
        .with_constant(0.0)
        .with_support(0.0)
}

/// A test function: analytic on `|Im z| < strip` with a declared real-axis
/// envelope.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub label: String,
    pub expr: Expr,
    pub strip: f64,
    pub growth: GrowthClass,
    pub constant: f64,
}

impl TestFunction {
    pub fn new(label: impl Into<String>, expr: Expr, strip: f64, growth: GrowthClass, constant: f64) -> Self {
        TestFunction {
            label: label.into(),
            expr,
            strip,
            growth,
            constant,
        }
    }

    pub fn parse(label: impl Into<String>, text: &str, strip: f64, growth: GrowthClass, constant: f64) -> Result<Self> {
        Ok(TestFunction::new(label, parse_expr(text)?, strip, growth, constant))
    }

    /// `e^{−z²}`, bounded by `e·e^{−2|x|}`.
    pub fn gaussian() -> Self {
        TestFunction::new("gaussian", Expr::gaussian(Expr::z()), 2.0, GrowthClass::ExponentialDecay(2.0), std::f64::consts::E)
    }

    /// `sech z`, bounded by `2e^{−|x|}`; poles at `±iπ/2`.
    pub fn sech() -> Self {
        TestFunction::new("sech", Expr::sech(Expr::z()), 1.5, GrowthClass::ExponentialDecay(1.0), 2.0)
    }

    /// `z e^{−z²}`, bounded by `e^{−|x|}`.
    pub fn odd_gaussian() -> Self {
        TestFunction::new(
            "odd_gaussian",
            Expr::mul(Expr::z(), Expr::gaussian(Expr::z())),
            2.0,
            GrowthClass::ExponentialDecay(1.0),
            1.0,
        )
    }

    /// `e^{−(z−1/2)²}`, bounded by `e^{3/4}e^{−|x|}`.
    pub fn shifted_gaussian() -> Self {
        TestFunction::new(
            "shifted_gaussian",
            Expr::gaussian(Expr::sub(Expr::z(), Expr::real(0.5))),
            2.0,
            GrowthClass::ExponentialDecay(1.0),
            0.75f64.exp() * 1.0001,
        )
    }

    /// `zⁿ`, tempered of order `n`.
    pub fn monomial(n: usize) -> Self {
        TestFunction::new(
            format!("z^{n}"),
            Expr::powi(Expr::z(), n as i32),
            f64::INFINITY,
            GrowthClass::Tempered(n as f64),
            1.0,
        )
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.expr.eval_z(z)?)
    }

    /// `φ⁽ᵏ⁾(z)` by symbolic differentiation.
    pub fn derivative_at(&self, k: usize, z: Complex64) -> Result<Complex64> {
        Ok(differentiate(&self.expr, k, 0).eval_z(z)?)
    }

    /// `φ(x/λ)`: the strip widens by `|λ|` and exponential rates shrink by it.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if lambda == 0.0 || !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("dilation factor must be finite and nonzero, got {lambda}")));
        }
        let s = lambda.abs();
        let expr = self.expr.substitute(0, &Expr::mul(Expr::real(1.0 / lambda), Expr::z()));
        let (growth, constant) = match self.growth {
            GrowthClass::ExponentialDecay(d) => (GrowthClass::ExponentialDecay(d / s), self.constant),
            GrowthClass::Tempered(g) => (self.growth, self.constant * s.powf(-g).max(1.0)),
            GrowthClass::Asymptotic => (self.growth, self.constant * s.powi(2).max(1.0)),
            GrowthClass::InfraExponential => (self.growth, self.constant),
        };
        Ok(TestFunction::new(format!("{}(x/{lambda})", self.label), expr, self.strip * s, growth, constant))
    }
}

/// The four analytic test functions used for suite-wide checks.
pub fn standard_suite() -> Vec<TestFunction> {
    vec![
        TestFunction::gaussian(),
        TestFunction::sech(),
        TestFunction::odd_gaussian(),
        TestFunction::shifted_gaussian(),
    ]
}
