use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::function::{check_direction, complement_basis, factorial, MultiDimFunction};
use super::slice::cauchy_value;
use crate::quad::ContourSpec;
use crate::{Error, Result};

/// Highest tangential derivative order probed.
pub const MAX_GEVREY_ORDER: usize = 4;

/// Angular step of the difference quotients.
pub const GEVREY_STEP: f64 = 0.2;

/// Slack, in natural-log units, allowed above the fitted envelope.
pub const GEVREY_HEADROOM: f64 = 1.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyOrder {
    pub order: usize,
    /// `|∂_θ^m G(ω(θ), τ₀)|` at `θ = 0`.
    pub value: f64,
    /// Rounding and quadrature noise propagated through the quotient.
    pub noise: f64,
    pub included: bool,
    /// `C (m!)²/v^m` with the fitted constants.
    pub envelope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyFit {
    pub label: String,
    pub direction: Vec<f64>,
    pub tangent: Vec<f64>,
    pub tau: Complex64,
    pub orders: Vec<GevreyOrder>,
    pub constant: f64,
    pub rate: f64,
    /// Largest `|residual|` of the log-linear fit.
    pub residual: f64,
    /// Fewer than two orders rose above the noise.
    pub noise_dominated: bool,
    pub pass: bool,
}

/// Tangential derivatives of `G(ω, τ₀)` on the unit sphere, fitted against
/// the Gevrey-2 envelope `C (m!)²/v^m`.
///
/// Along `ω(θ) = cos θ·ω₀ + sin θ·v`, `v` the first vector of the
/// complement basis, central differences with one Richardson step give
/// `∂_θ^m G` for `m ≤ max_order`. Orders within ten times their noise are
/// dropped. The line `log|∂^m G| − 2 log m! = log C − m log v` is fitted on
/// the retained orders below the highest, and `C` is raised to the largest
/// positive residual. The probe passes when the highest retained order
/// stays within `e^{GEVREY_HEADROOM}` of the extrapolated envelope and the
/// fit residual is at most `GEVREY_HEADROOM`.
pub fn gevrey_probe(
    f: &MultiDimFunction,
    omega0: &[f64],
    tau0: Complex64,
    max_order: usize,
    spec: &ContourSpec,
) -> Result<GevreyFit> {
    if max_order > MAX_GEVREY_ORDER {
        return Err(Error::InvalidArgument(format!(
            "Gevrey probe order {max_order} exceeds the cap {MAX_GEVREY_ORDER}"
        )));
    }
    check_direction(omega0, f.dim())?;
    if f.dim() < 2 {
        return Err(Error::InvalidArgument("the sphere in one dimension has no tangent directions".into()));
    }
    let tangent = complement_basis(omega0).remove(0);
    let h = GEVREY_STEP;
    // values at θ = i·h/4
    let mut memo: BTreeMap<i64, Complex64> = BTreeMap::new();
    let mut at = |i: i64| -> Result<Complex64> {
        if let Some(v) = memo.get(&i) {
            return Ok(*v);
        }
        let t = i as f64 * h / 4.0;
        let w: Vec<f64> = omega0
            .iter()
            .zip(&tangent)
            .map(|(a, b)| t.cos() * a + t.sin() * b)
            .collect();
        let v = cauchy_value(f, &w, tau0, spec)?;
        memo.insert(i, v);
        Ok(v)
    };
    let g0 = at(0)?;
    let value_noise = match f {
        MultiDimFunction::SmoothRapid(_) => 10.0 * spec.abs_tol + 1e-15 * g0.norm(),
        MultiDimFunction::DeltaCombo(_) => 1e-15 * g0.norm().max(1e-300),
    };
    let mut orders = Vec::with_capacity(max_order + 1);
    for m in 0..=max_order {
        // central difference of order m with step `quarters·h/4`
        let mut diff = |quarters: i64| -> Result<Complex64> {
            let mut acc = Complex64::new(0.0, 0.0);
            let mut binom = 1.0;
            for j in 0..=m {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                // offset (m/2 − j)·step in units of h/4; `quarters` is even
                let twice = (m as i64 - 2 * j as i64) * quarters;
                acc += sign * binom * at(twice / 2)?;
                binom = binom * (m - j) as f64 / (j + 1) as f64;
            }
            Ok(acc / (quarters as f64 * h / 4.0).powi(m as i32))
        };
        let value = if m == 0 {
            g0.norm()
        } else {
            let coarse = diff(4)?;
            let fine = diff(2)?;
            ((4.0 * fine - coarse) / 3.0).norm()
        };
        let noise = if m == 0 {
            value_noise
        } else {
            2.0 * value_noise * (4.0 / h).powi(m as i32)
        };
        orders.push(GevreyOrder {
            order: m,
            value,
            noise,
            included: value > 10.0 * noise,
            envelope: 0.0,
        });
    }
    let kept: Vec<(f64, f64)> = orders
        .iter()
        .filter(|o| o.included)
        .map(|o| (o.order as f64, o.value.ln() - 2.0 * factorial(o.order).ln()))
        .collect();
    let noise_dominated = kept.len() < 2;
    let (constant, rate, residual, pass) = if noise_dominated {
        let c = orders
            .iter()
            .map(|o| o.value.max(o.noise))
            .fold(0.0, f64::max);
        (c, 1.0, 0.0, true)
    } else {
        let (fit_points, last) = if kept.len() >= 3 {
            (&kept[..kept.len() - 1], Some(kept[kept.len() - 1]))
        } else {
            (&kept[..], None)
        };
        let (a, b) = line_fit(fit_points);
        let residual = fit_points
            .iter()
            .map(|&(m, y)| (y - a - b * m).abs())
            .fold(0.0, f64::max);
        let lift = fit_points
            .iter()
            .map(|&(m, y)| y - a - b * m)
            .fold(0.0, f64::max);
        let log_c = a + lift;
        let within = last.map_or(true, |(m, y)| y <= log_c + b * m + GEVREY_HEADROOM);
        (log_c.exp(), (-b).exp(), residual, within && residual <= GEVREY_HEADROOM)
    };
    for o in &mut orders {
        let m = o.order as i32;
        o.envelope = constant * factorial(o.order).powi(2) / rate.powi(m);
    }
    Ok(GevreyFit {
        label: match f {
            MultiDimFunction::SmoothRapid(g) => g.label.clone(),
            MultiDimFunction::DeltaCombo(d) => d.label.clone(),
        },
        direction: omega0.to_vec(),
        tangent,
        tau: tau0,
        orders,
        constant,
        rate,
        residual,
        noise_dominated,
        pass,
    })
}

/// Least-squares `y = a + b·x`.
fn line_fit(points: &[(f64, f64)]) -> (f64, f64) {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    (my - b * mx, b)
}
