use num_complex::Complex64;

use super::object::{Hyperfunction1D, TestFunction};
use crate::expr::GrowthClass;
use crate::quad::{integrate_interval, resolve_radius, ContourSpec, QuadResult, TailModel};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Real-axis envelope of the product `f·φ`, or an error if the product is
/// not integrable for the declared classes.
pub fn product_tail(
    f: (GrowthClass, f64),
    phi: (GrowthClass, f64),
) -> Result<TailModel> {
    use GrowthClass::*;
    let constant = f.1 * phi.1;
    let inadmissible = || {
        Err(Error::Inadmissible(format!(
            "{} against {} is not integrable",
            f.0, phi.0
        )))
    };
    let (growth, weight) = match (f.0, phi.0) {
        (ExponentialDecay(a), ExponentialDecay(b)) => (ExponentialDecay(a + b), 0.0),
        (ExponentialDecay(a), Tempered(g)) | (Tempered(g), ExponentialDecay(a)) => {
            (ExponentialDecay(a), g)
        }
        (ExponentialDecay(a), Asymptotic) | (Asymptotic, ExponentialDecay(a)) => {
            (ExponentialDecay(a), 0.0)
        }
        (ExponentialDecay(a), InfraExponential) | (InfraExponential, ExponentialDecay(a)) => {
            (ExponentialDecay(a / 2.0), 0.0)
        }
        (Asymptotic, Asymptotic) => (Asymptotic, 0.0),
        (Asymptotic, Tempered(g)) | (Tempered(g), Asymptotic) => (Asymptotic, g),
        (Tempered(a), Tempered(b)) if a + b < -1.0 => (Tempered(a + b), 0.0),
        _ => return inadmissible(),
    };
    Ok(TailModel::new(growth, weight, constant))
}

/// Tail model of `⟨f, φ⟩`, `None` when `f` has compact support.
pub fn pairing_tail(f: &Hyperfunction1D, growth: GrowthClass, constant: f64) -> Result<Option<TailModel>> {
    if f.support_radius.is_some() {
        return Ok(None);
    }
    product_tail((f.growth, f.constant), (growth, constant)).map(Some)
}

/// Half the narrowest strip among `f` and the test function.
pub fn default_offset(f: &Hyperfunction1D, test_strip: f64) -> f64 {
    0.5 * f.min_strip().min(test_strip)
}

/// `⟨f, φ⟩` on the default contour offset.
pub fn pair(f: &Hyperfunction1D, phi: &TestFunction, spec: &ContourSpec) -> Result<QuadResult> {
    pair_at(f, phi, &spec.with_offset(default_offset(f, phi.strip)))
}

/// `⟨f, φ⟩` with the offset taken from `spec.imag_offset`.
pub fn pair_at(f: &Hyperfunction1D, phi: &TestFunction, spec: &ContourSpec) -> Result<QuadResult> {
    let eta = spec.imag_offset.abs();
    if eta >= f.min_strip() || eta >= phi.strip || eta == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "contour offset {eta} must be nonzero and inside the strips of `{}` ({}, {}) and `{}` ({})",
            f.label, f.strip_plus, f.strip_minus, phi.label, phi.strip
        )));
    }
    let tail = pairing_tail(f, phi.growth, phi.constant)?;
    pair_kernel(f, |z| phi.eval(z), tail.as_ref(), spec)
}

/// `⟨f, g⟩` for an arbitrary analytic kernel `g`.
///
/// The value is the integral of the boundary value `f·g` over `[−R, R]`,
/// computed as the upper line minus the lower line at `|Im z| = η`, closed by
/// the four vertical sides at `Re z = ±R`. Truncation beyond `R` is bounded
/// by `tail` (no tail when `None`).
pub fn pair_kernel<G>(
    f: &Hyperfunction1D,
    g: G,
    tail: Option<&TailModel>,
    spec: &ContourSpec,
) -> Result<QuadResult>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let eta = spec.imag_offset.abs();
    let min_radius = f.support_radius.map_or(0.0, |r| r + eta);
    let (r, tail_bound) = resolve_radius(spec.radius, tail, spec.abs_tol, min_radius)?;
    let plus_live = !f.f_plus.is_zero();
    let minus_live = !f.f_minus.is_zero();
    let zero = Complex64::new(0.0, 0.0);
    let upper = |z: Complex64| -> Result<Complex64> {
        if plus_live {
            Ok(f.f_plus.eval(z)? * g(z)?)
        } else {
            Ok(zero)
        }
    };
    let lower = |z: Complex64| -> Result<Complex64> {
        if minus_live {
            Ok(f.f_minus.eval(z)? * g(z)?)
        } else {
            Ok(zero)
        }
    };
    let lines = integrate_interval(
        |x| Ok(upper(Complex64::new(x, eta))? - lower(Complex64::new(x, -eta))?),
        -r,
        r,
        spec.adaptive(spec.abs_tol / 2.0),
    )?;
    let side_opts = spec.adaptive(spec.abs_tol / 4.0);
    let left = integrate_interval(
        |s| Ok(I * (upper(Complex64::new(-r, s))? + lower(Complex64::new(-r, -s))?)),
        0.0,
        eta,
        side_opts,
    )?;
    let right = integrate_interval(
        |s| Ok(-I * (upper(Complex64::new(r, s))? + lower(Complex64::new(r, -s))?)),
        0.0,
        eta,
        side_opts,
    )?;
    Ok(QuadResult {
        value: lines.value + left.value + right.value,
        error_estimate: lines.error_estimate + left.error_estimate + right.error_estimate,
        tail_bound,
        nodes_used: lines.nodes_used + left.nodes_used + right.nodes_used,
    })
}

/// `⟨f(λx), φ(x)⟩ = (1/|λ|)⟨f, φ(·/λ)⟩`.
pub fn scale_pair(f: &Hyperfunction1D, phi: &TestFunction, lambda: f64, spec: &ContourSpec) -> Result<QuadResult> {
    let scaled = phi.dilate(lambda)?;
    let q = pair(f, &scaled, spec)?;
    let s = 1.0 / lambda.abs();
    Ok(QuadResult {
        value: q.value * s,
        error_estimate: q.error_estimate * s,
        tail_bound: q.tail_bound * s,
        nodes_used: q.nodes_used,
    })
}
