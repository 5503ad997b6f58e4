use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::defining::DefiningFunction;
use super::object::Hyperfunction1D;
use super::pairing::{pair_kernel, pairing_tail};
use crate::expr::GrowthClass;
use crate::quad::ContourSpec;
use crate::{Error, Result};

/// `h_z(w) = (−1/2πi) e^{−(z−w)²}/(z−w)`.
pub fn cauchy_hilbert_kernel(z: Complex64, w: Complex64) -> Complex64 {
    let d = z - w;
    Complex64::new(0.0, 1.0 / (2.0 * PI)) * (-d * d).exp() / d
}

/// `G(z) = ⟨f, h_z⟩` for `z` off the real axis.
///
/// The inner contour sits at `min(η_f, |Im z|)/2`, so the pole of `h_z` stays
/// outside the region swept between the two lines.
pub fn standardized_value(f: &Hyperfunction1D, z: Complex64, spec: &ContourSpec) -> Result<Complex64> {
    if z.im == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "standardized defining function is not defined on the real axis (z = {z})"
        )));
    }
    let eta = (0.5 * f.min_strip()).min(0.5 * z.im.abs());
    // |h_z(x)| <= e^{y²}/(2π|y|) · e^{|a| + 1/4} · e^{−|x|}
    let constant = (z.im * z.im).exp() / (2.0 * PI * z.im.abs()) * (z.re.abs() + 0.25).exp();
    let tail = pairing_tail(f, GrowthClass::ExponentialDecay(1.0), constant)?;
    let q = pair_kernel(
        f,
        |w| Ok(cauchy_hilbert_kernel(z, w)),
        tail.as_ref(),
        &spec.with_offset(eta),
    )?;
    Ok(q.value)
}

/// Replaces both defining functions by the single kernel transform
/// `G(z) = ⟨f, h_z⟩`, which represents the same hyperfunction.
pub fn standardize(f: &Hyperfunction1D, spec: &ContourSpec) -> Result<Hyperfunction1D> {
    if f.support_radius.is_none() && f.growth == GrowthClass::InfraExponential {
        return Err(Error::InvalidArgument(format!(
            "standardization needs an asymptotic or tempered input, `{}` is {}",
            f.label, f.growth
        )));
    }
    let inner = f.clone();
    let inner_spec = *spec;
    let g = DefiningFunction::numeric(format!("std {}", f.label), move |z| {
        standardized_value(&inner, z, &inner_spec)
    });
    let mut out = f.clone();
    out.label = format!("std({})", f.label);
    out.f_plus = g.clone();
    out.f_minus = g;
    Ok(out)
}

/// `G` sampled on a grid of points off the real axis.
pub fn standardize_on(f: &Hyperfunction1D, grid: &[Complex64], spec: &ContourSpec) -> Result<Vec<Complex64>> {
    grid.par_iter().map(|&z| standardized_value(f, z, spec)).collect()
}
