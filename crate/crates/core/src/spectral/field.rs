use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::expr::{differentiate, Expr, GrowthClass};
use crate::hyper::{default_offset, pair_kernel, pairing_tail, DefiningFunction, Hyperfunction1D};
use crate::quad::{kronrod_rule, ContourSpec, QuadResult};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default number of derivatives a field exposes.
pub const DEFAULT_DERIVATIVE_CAP: usize = 12;

/// `(ξ, k) ↦ g⁽ᵏ⁾(ξ)`.
pub type FieldFn = Arc<dyn Fn(f64, usize) -> Result<Complex64> + Send + Sync>;

/// Real-axis description of the hyperfunction a field is the transform of.
/// Inverse transforms need it to bound pairing tails.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpatialEnvelope {
    pub growth: GrowthClass,
    pub constant: f64,
    pub support_radius: Option<f64>,
}

impl SpatialEnvelope {
    pub fn of(f: &Hyperfunction1D) -> Self {
        SpatialEnvelope {
            growth: f.growth,
            constant: f.constant,
            support_radius: f.support_radius,
        }
    }
}

/// A smooth function of `ξ ∈ ℝ` with access to its derivatives.
///
/// Values are memoized per `(ξ, order)`; the evaluator itself holds only
/// immutable data, so a field can be shared freely between threads.
#[derive(Clone)]
pub struct SmoothField {
    pub label: String,
    pub growth: GrowthClass,
    pub derivative_order_cap: usize,
    pub spatial: Option<SpatialEnvelope>,
    eval: FieldFn,
    cache: Arc<DashMap<(u64, usize), Complex64>>,
}

impl fmt::Debug for SmoothField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothField")
            .field("label", &self.label)
            .field("growth", &self.growth)
            .field("derivative_order_cap", &self.derivative_order_cap)
            .field("spatial", &self.spatial)
            .finish()
    }
}

impl SmoothField {
    pub fn from_fn<F>(label: impl Into<String>, growth: GrowthClass, cap: usize, f: F) -> Self
    where
        F: Fn(f64, usize) -> Result<Complex64> + Send + Sync + 'static,
    {
        SmoothField {
            label: label.into(),
            growth,
            derivative_order_cap: cap,
            spatial: None,
            eval: Arc::new(f),
            cache: Arc::new(DashMap::new()),
        }
    }

    /// A field given by an expression in `z` (read as `ξ`); derivatives are
    /// symbolic.
    pub fn from_expr(label: impl Into<String>, e: &Expr, growth: GrowthClass, cap: usize) -> Self {
        let derivs: Vec<Expr> = (0..=cap).map(|k| differentiate(e, k, 0)).collect();
        SmoothField::from_fn(label, growth, cap, move |xi, k| {
            Ok(derivs[k].eval_z(Complex64::new(xi, 0.0))?)
        })
    }

    pub fn with_spatial(mut self, envelope: SpatialEnvelope) -> Self {
        self.spatial = Some(envelope);
        self
    }

    pub fn value(&self, xi: f64) -> Result<Complex64> {
        self.derivative(0, xi)
    }

    pub fn derivative(&self, k: usize, xi: f64) -> Result<Complex64> {
        if k > self.derivative_order_cap {
            return Err(Error::InvalidArgument(format!(
                "derivative order {k} exceeds the cap {} of `{}`",
                self.derivative_order_cap, self.label
            )));
        }
        let key = (xi.to_bits(), k);
        if let Some(v) = self.cache.get(&key) {
            return Ok(*v);
        }
        let v = (self.eval)(xi, k)?;
        self.cache.insert(key, v);
        Ok(v)
    }

    /// Central-difference estimate of the `k`-th derivative from values
    /// only, with one Richardson step. Used to cross-check the exact
    /// derivative paths.
    pub fn finite_difference(&self, k: usize, xi: f64, h: f64) -> Result<Complex64> {
        let coarse = self.central_difference(k, xi, h)?;
        let fine = self.central_difference(k, xi, h / 2.0)?;
        Ok((4.0 * fine - coarse) / 3.0)
    }

    fn central_difference(&self, k: usize, xi: f64, h: f64) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut binom = 1.0;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let x = xi + (k as f64 / 2.0 - j as f64) * h;
            acc += sign * binom * (self.eval)(x, 0)?;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        Ok(acc / h.powi(k as i32))
    }

    /// Pointwise product; derivatives by the Leibniz rule.
    pub fn product(&self, other: &SmoothField, label: impl Into<String>) -> SmoothField {
        let (a, b) = (self.clone(), other.clone());
        let growth = self.growth.weakest(other.growth);
        let cap = self.derivative_order_cap.min(other.derivative_order_cap);
        let mut out = SmoothField::from_fn(label, growth, cap, move |xi, k| {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut binom = 1.0;
            for j in 0..=k {
                acc += binom * a.derivative(j, xi)? * b.derivative(k - j, xi)?;
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
            Ok(acc)
        });
        out.spatial = self.spatial.or(other.spatial);
        out
    }

    pub fn cached_values(&self) -> usize {
        self.cache.len()
    }
}

/// `D^k f̂(ξ) = ⟨f, (−iz)^k e^{−izξ}⟩`, with the contour pulled to within
/// `1/|ξ|` of the axis so the exponential stays bounded.
pub fn fourier_derivative(f: &Hyperfunction1D, k: usize, xi: f64, spec: &ContourSpec) -> Result<QuadResult> {
    f.require_asymptotic()?;
    let mut eta = default_offset(f, f64::INFINITY);
    if xi != 0.0 {
        eta = eta.min(1.0 / xi.abs());
    }
    let tail = pairing_tail(f, GrowthClass::Tempered(k as f64), 1.0)?;
    let spec = spec.with_offset(eta).with_frequency(xi.abs());
    pair_kernel(
        f,
        |z| Ok((-I * z).powu(k as u32) * (-I * z * xi).exp()),
        tail.as_ref(),
        &spec,
    )
}

/// `f̂(ξ) = ∫ f(x) e^{−ixξ} dx` as a field tagged infra-exponential.
/// Tempered inputs are rejected.
pub fn fourier_transform(f: &Hyperfunction1D, spec: &ContourSpec) -> Result<SmoothField> {
    f.require_asymptotic()?;
    let g = f.clone();
    let spec = *spec;
    Ok(SmoothField::from_fn(
        format!("F[{}]", f.label),
        GrowthClass::InfraExponential,
        DEFAULT_DERIVATIVE_CAP,
        move |xi, k| Ok(fourier_derivative(&g, k, xi, &spec)?.value),
    )
    .with_spatial(SpatialEnvelope::of(f)))
}

/// Discretization of the half-line integrals in [`inverse_fourier`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InverseOptions {
    /// Width of each Kronrod panel in `ξ`.
    pub panel: f64,
    /// Hard cutoff of the grid; beyond it an integration-by-parts tail is
    /// used.
    pub xi_max: f64,
    /// Maximum number of integration-by-parts terms.
    pub tail_terms: usize,
    /// Strip width declared for the resulting defining functions.
    pub strip: f64,
    /// Real-axis envelope of the result; falls back to the field's own.
    pub spatial: Option<SpatialEnvelope>,
}

impl Default for InverseOptions {
    fn default() -> Self {
        InverseOptions {
            panel: 0.15,
            xi_max: 40.0,
            tail_terms: 4,
            strip: 1.0,
            spatial: None,
        }
    }
}

/// `∫₀^∞ e^{iwξ} h(ξ) dξ` for `Im w > 0` on a frozen grid.
struct HalfLine {
    nodes: Vec<f64>,
    weighted: Vec<Complex64>,
    end: f64,
    end_derivs: Vec<Complex64>,
}

impl HalfLine {
    fn build(g: &SmoothField, sign: f64, opts: &InverseOptions, tol: f64) -> Result<HalfLine> {
        let mut nodes = Vec::new();
        let mut weighted = Vec::new();
        let mut quiet = 0;
        let mut a = 0.0;
        const BATCH: usize = 8;
        'outer: while a < opts.xi_max {
            let panels: Vec<(f64, f64)> = (0..BATCH)
                .map(|j| {
                    let lo = a + j as f64 * opts.panel;
                    (lo, (lo + opts.panel).min(opts.xi_max))
                })
                .filter(|(lo, hi)| hi > lo)
                .collect();
            let values: Vec<Result<Vec<(f64, Complex64)>>> = panels
                .par_iter()
                .map(|&(lo, hi)| {
                    kronrod_rule(lo, hi)
                        .iter()
                        .map(|&(x, w)| Ok((x, w * g.value(sign * x)?)))
                        .collect()
                })
                .collect();
            for ((_, hi), panel) in panels.iter().zip(values) {
                let panel = panel?;
                let size: f64 = panel.iter().map(|(_, v)| v.norm()).sum();
                for (x, v) in panel {
                    nodes.push(x);
                    weighted.push(v);
                }
                a = *hi;
                quiet = if size < 1e-3 * tol { quiet + 1 } else { 0 };
                if quiet >= 4 {
                    break 'outer;
                }
            }
        }
        let end_derivs = (0..=opts.tail_terms.min(g.derivative_order_cap))
            .map(|k| Ok(sign.powi(k as i32) * g.derivative(k, sign * a)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(HalfLine {
            nodes,
            weighted,
            end: a,
            end_derivs,
        })
    }

    fn eval(&self, w: Complex64) -> Complex64 {
        let mut s: Complex64 = self
            .nodes
            .iter()
            .zip(&self.weighted)
            .map(|(&x, &v)| v * (I * w * x).exp())
            .sum();
        // ∫_Ξ^∞ e^{iwξ}h = −e^{iwΞ} Σ (−1)^k h⁽ᵏ⁾(Ξ)/(iw)^{k+1}, cut at the
        // smallest term; the expansion needs w ≠ 0
        let iw = I * w;
        if iw.norm() == 0.0 {
            return s;
        }
        let mut tail = Complex64::new(0.0, 0.0);
        let mut last = f64::INFINITY;
        let mut pow = iw;
        for (k, d) in self.end_derivs.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let term = sign * d / pow;
            if term.norm() > last {
                break;
            }
            last = term.norm();
            tail += term;
            pow *= iw;
        }
        s -= (iw * self.end).exp() * tail;
        s
    }
}

/// Hyperfunction with `F₊(z) = (1/2π)∫₀^∞ e^{izξ}g(ξ)dξ` and
/// `F₋(z) = −(1/2π)∫_{−∞}^0 e^{izξ}g(ξ)dξ`.
///
/// The half-line integrals use a fixed composite Kronrod grid on
/// `[0, xi_max]`, stopped early once `g` is negligible, followed by an
/// integration-by-parts tail. Values of `g` are sampled once, so the result
/// is cheap to evaluate. The grid resolves `e^{izξ}` for `|Re z| ≲ 5/panel`.
pub fn inverse_fourier(g: &SmoothField, opts: &InverseOptions, spec: &ContourSpec) -> Result<Hyperfunction1D> {
    let spatial = opts.spatial.or(g.spatial).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "the real-axis class of the inverse transform of `{}` must be declared",
            g.label
        ))
    })?;
    if !(opts.panel > 0.0 && opts.xi_max > 0.0 && opts.strip > 0.0) {
        return Err(Error::InvalidArgument(format!("bad inverse transform options {opts:?}")));
    }
    let plus = Arc::new(HalfLine::build(g, 1.0, opts, spec.abs_tol)?);
    let minus = Arc::new(HalfLine::build(g, -1.0, opts, spec.abs_tol)?);
    let label = format!("F^-1[{}]", g.label);
    let f_plus = DefiningFunction::numeric(format!("{label}+"), move |z: Complex64| {
        if z.im < 0.0 {
            return Err(Error::InvalidArgument(format!("upper branch evaluated at {z}")));
        }
        Ok(plus.eval(z) / (2.0 * PI))
    });
    let f_minus = DefiningFunction::numeric(format!("{label}-"), move |z: Complex64| {
        if z.im > 0.0 {
            return Err(Error::InvalidArgument(format!("lower branch evaluated at {z}")));
        }
        Ok(-minus.eval(-z) / (2.0 * PI))
    });
    let mut out = Hyperfunction1D::new(label, f_plus, f_minus, (opts.strip, opts.strip), spatial.growth)
        .with_constant(spatial.constant);
    out.support_radius = spatial.support_radius;
    Ok(out)
}
