use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::fourier_derivative;
use crate::expr::{Expr, GrowthClass};
use crate::hyper::{
    delta_derivative, pair, scale_pair, Hyperfunction1D, TestFunction,
};
use crate::quad::ContourSpec;
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn neg_pow(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Moments `μ⁰..μᴺ` of some hyperfunction, with an optional bound
/// `|μᵏ| ≤ M·Rᵏ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSequence {
    pub label: String,
    pub values: Vec<Complex64>,
    #[serde(default)]
    pub bound: Option<(f64, f64)>,
}

impl MomentSequence {
    pub fn new(label: impl Into<String>, values: Vec<Complex64>) -> Self {
        MomentSequence {
            label: label.into(),
            values,
            bound: None,
        }
    }

    pub fn real(label: impl Into<String>, values: &[f64]) -> Self {
        MomentSequence::new(label, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn order(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    /// Finite values, and within the declared bound if any.
    pub fn check(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidArgument(format!("moment sequence `{}` is empty", self.label)));
        }
        for (k, v) in self.values.iter().enumerate() {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "moment {k} of `{}` is not finite",
                    self.label
                )));
            }
            if let Some((m, r)) = self.bound {
                let cap = m * r.powi(k as i32);
                if v.norm() > cap * (1.0 + 1e-12) {
                    return Err(Error::MomentBound {
                        k,
                        value: v.norm(),
                        bound: cap,
                    });
                }
            }
        }
        Ok(())
    }
}

/// `μⁿ(f) = ⟨f, zⁿ⟩`.
pub fn moment(f: &Hyperfunction1D, n: usize, spec: &ContourSpec) -> Result<Complex64> {
    f.require_asymptotic()?;
    Ok(pair(f, &TestFunction::monomial(n), spec)?.value)
}

pub fn moments(f: &Hyperfunction1D, order: usize, spec: &ContourSpec) -> Result<MomentSequence> {
    let values = (0..=order)
        .map(|n| moment(f, n, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentSequence::new(f.label.clone(), values))
}

/// `S_f^N = Σ_{n≤N} cₙ δ⁽ⁿ⁾` with `cₙ = (−1)ⁿμⁿ/n!`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSum {
    pub label: String,
    pub order: usize,
    pub moments: Vec<Complex64>,
    pub coefficients: Vec<Complex64>,
}

impl AsymptoticSum {
    pub fn from_moments(mu: &MomentSequence) -> Self {
        let coefficients = mu
            .values
            .iter()
            .enumerate()
            .map(|(n, m)| {
                let s = neg_pow(n);
                Complex64::new(s * m.re / factorial(n), s * m.im / factorial(n))
            })
            .collect();
        AsymptoticSum {
            label: format!("S[{}]", mu.label),
            order: mu.order(),
            moments: mu.values.clone(),
            coefficients,
        }
    }

    /// The sum as a point-supported hyperfunction.
    pub fn realize(&self) -> Hyperfunction1D {
        let deltas: Vec<Hyperfunction1D> = (0..=self.order).map(delta_derivative).collect();
        let terms: Vec<(Complex64, &Hyperfunction1D)> =
            self.coefficients.iter().copied().zip(deltas.iter()).collect();
        let mut out = Hyperfunction1D::linear_combination(self.label.clone(), &terms);
        out.strip_plus = 4.0;
        out.strip_minus = 4.0;
        out.support_radius = Some(0.0);
        out
    }
}

pub fn asymptotic_sum(f: &Hyperfunction1D, order: usize, spec: &ContourSpec) -> Result<AsymptoticSum> {
    Ok(AsymptoticSum::from_moments(&moments(f, order, spec)?))
}

/// `f − S_f^N`.
pub fn remainder(f: &Hyperfunction1D, sum: &AsymptoticSum) -> Hyperfunction1D {
    f.sub(&sum.realize())
}

/// Moments `0..=order` of `f − S_f^N`, pairing `f` and the point-supported
/// sum on their own contours. A single long contour for the difference
/// would carry the large, cancelling `zⁿ/z^{k+1}` terms of the sum.
pub fn remainder_moments(
    f: &Hyperfunction1D,
    sum: &AsymptoticSum,
    order: usize,
    spec: &ContourSpec,
) -> Result<Vec<Complex64>> {
    let s = sum.realize();
    (0..=order)
        .map(|n| Ok(moment(f, n, spec)? - moment(&s, n, spec)?))
        .collect()
}

/// One row of the moment–derivative cross-check `iᵏ f̂⁽ᵏ⁾(0) = μᵏ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityCheck {
    pub k: usize,
    pub from_transform: Complex64,
    pub moment: Complex64,
    pub discrepancy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaylorReport {
    pub label: String,
    /// `(−i)ⁿμⁿ/n!`, the Taylor coefficients of `f̂` at 0.
    pub coefficients: Vec<Complex64>,
    pub checks: Vec<DualityCheck>,
}

impl TaylorReport {
    pub fn worst_relative(&self) -> f64 {
        self.checks
            .iter()
            .map(|c| c.discrepancy / (1.0 + c.moment.norm()))
            .fold(0.0, f64::max)
    }
}

pub fn taylor_of_ft(f: &Hyperfunction1D, order: usize, spec: &ContourSpec) -> Result<TaylorReport> {
    let mu = moments(f, order, spec)?;
    let mut coefficients = Vec::with_capacity(order + 1);
    let mut checks = Vec::with_capacity(order + 1);
    for (k, m) in mu.values.iter().enumerate() {
        coefficients.push((-I).powu(k as u32) * m / factorial(k));
        let d = fourier_derivative(f, k, 0.0, spec)?.value;
        let from_transform = I.powu(k as u32) * d;
        checks.push(DualityCheck {
            k,
            from_transform,
            moment: *m,
            discrepancy: (from_transform - m).norm(),
        });
    }
    Ok(TaylorReport {
        label: f.label.clone(),
        coefficients,
        checks,
    })
}

/// Result of fitting `log|r(λ)|` against `log λ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametricFit {
    pub label: String,
    pub order: usize,
    pub lambdas: Vec<f64>,
    pub residuals: Vec<f64>,
    pub noise_floor: Vec<f64>,
    /// `None` when every residual is below its noise floor.
    pub slope: Option<f64>,
    /// `−(N+2) + 0.25`.
    pub bound: f64,
    pub vacuous: bool,
    pub pass: bool,
}

/// Residuals below `NOISE_FACTOR` times the quadrature uncertainty (plus
/// rounding of the expansion terms) are treated as noise.
pub const NOISE_FACTOR: f64 = 100.0;

pub fn parametric_order_check(
    f: &Hyperfunction1D,
    phi: &TestFunction,
    order: usize,
    lambdas: &[f64],
    spec: &ContourSpec,
) -> Result<ParametricFit> {
    if lambdas.len() < 2 || lambdas.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "need at least two positive λ values, got {lambdas:?}"
        )));
    }
    let mu = moments(f, order, spec)?;
    let derivs = (0..=order)
        .map(|n| phi.derivative_at(n, Complex64::new(0.0, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let mut residuals = Vec::new();
    let mut noise_floor = Vec::new();
    for &lambda in lambdas {
        let q = scale_pair(f, phi, lambda, spec)?;
        let mut expansion = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for n in 0..=order {
            let term = mu.values[n] * derivs[n] / (factorial(n) * lambda.powi(n as i32 + 1));
            scale += term.norm();
            expansion += term;
        }
        residuals.push((q.value - expansion).norm());
        noise_floor.push(NOISE_FACTOR * (q.uncertainty() + f64::EPSILON * (scale + q.value.norm())));
    }
    let used: Vec<(f64, f64)> = lambdas
        .iter()
        .zip(residuals.iter().zip(&noise_floor))
        .filter(|(_, (r, n))| r > n)
        .map(|(l, (r, _))| (l.ln(), r.ln()))
        .collect();
    let bound = -(order as f64 + 2.0) + 0.25;
    let slope = if used.len() >= 2 {
        let n = used.len() as f64;
        let mx = used.iter().map(|p| p.0).sum::<f64>() / n;
        let my = used.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    let vacuous = used.is_empty();
    // a single resolved residual is not enough for a fit but is not a failure
    let pass = slope.map_or(true, |s| s <= bound);
    Ok(ParametricFit {
        label: format!("{} vs {}", f.label, phi.label),
        order,
        lambdas: lambdas.to_vec(),
        residuals,
        noise_floor,
        slope,
        bound,
        vacuous,
        pass,
    })
}

/// Output of [`realize_moments`].
#[derive(Clone, Debug)]
pub struct Realization {
    pub hyperfunction: Hyperfunction1D,
    /// `aₖ` in `f̂(ξ) = (Σ aₖξᵏ) e^{−ξ²}`.
    pub coefficients: Vec<Complex64>,
    /// `Σ|aₖ| / Σ|μᵏ|/k!`, a rough conditioning figure of the triangular
    /// solve.
    pub amplification: f64,
}

/// `aₖ` solving `f̂⁽ⁿ⁾(0) = (−i)ⁿμⁿ` for `f̂ = (Σ aₖξᵏ)e^{−ξ²}`.
pub fn gaussian_ansatz_coefficients(mu: &[Complex64]) -> Vec<Complex64> {
    let mut a: Vec<Complex64> = Vec::with_capacity(mu.len());
    for (n, m) in mu.iter().enumerate() {
        let mut v = (-I).powu(n as u32) * m / factorial(n);
        let mut j = n % 2;
        while j < n {
            let half = (n - j) / 2;
            v -= a[j] * (neg_pow(half) / factorial(half));
            j += 2;
        }
        a.push(v);
    }
    a
}

/// A Schwartz function with prescribed moments `μ⁰..μᴺ`:
/// `f = Σ aₖ (−i d/dz)ᵏ [e^{−z²/4}/(2√π)]`, the inverse transform of
/// `(Σ aₖξᵏ)e^{−ξ²}`.
pub fn realize_moments(mu: &MomentSequence) -> Result<Realization> {
    mu.check()?;
    let a = gaussian_ansatz_coefficients(&mu.values);
    let base = Expr::mul(
        Expr::real(1.0 / (2.0 * PI.sqrt())),
        Expr::gaussian(Expr::mul(Expr::real(0.5), Expr::z())),
    );
    let mut e = Expr::zero();
    let mut d = base;
    for (k, ak) in a.iter().enumerate() {
        if k > 0 {
            d = d.derivative(0);
        }
        if ak.norm() != 0.0 {
            let c = ak * (-I).powu(k as u32);
            e = Expr::add(e, Expr::mul(Expr::Const(c), d.clone()));
        }
    }
    // sup |f(x)| e^{|x|} on a fine grid, with a safety factor
    let mut sup: f64 = 0.0;
    for j in 0..=4000 {
        let x = j as f64 * 0.02;
        for s in [x, -x] {
            sup = sup.max(e.eval_z(Complex64::new(s, 0.0))?.norm() * x.exp());
        }
    }
    let constant = 2.0 * sup.max(1e-300);
    // the constant is measured directly, so the generic spot check is skipped
    let hyperfunction = Hyperfunction1D::new(
        format!("realize[{}]", mu.label),
        e,
        Expr::zero(),
        (2.0, 2.0),
        GrowthClass::ExponentialDecay(1.0),
    )
    .with_constant(constant);
    let den: f64 = mu
        .values
        .iter()
        .enumerate()
        .map(|(k, m)| m.norm() / factorial(k))
        .sum();
    let num: f64 = a.iter().map(|v| v.norm()).sum();
    Ok(Realization {
        hyperfunction,
        coefficients: a,
        amplification: if den > 0.0 { num / den } else { num },
    })
}
