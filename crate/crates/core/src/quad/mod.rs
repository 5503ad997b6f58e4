//! Adaptive quadrature on contour segments and boxes.
//!
//! Every integral is an adaptive Gauss-Kronrod 7/15 rule along a straight
//! segment of the complex plane. Infinite contours are truncated at a radius
//! whose discarded tail is bounded from a declared [`GrowthClass`].

mod boxes;
mod gk;
mod tail;
mod verify;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::Result;

pub use boxes::{integrate_box, MAX_BOX_DIMENSION};
pub use gk::{integrate as integrate_interval, kronrod_rule, Adaptive, Integral, NODES_PER_PANEL};
pub use tail::{
    resolve_radius, tail_bound, Radius, TailModel, MAX_AUTO_RADIUS, START_AUTO_RADIUS,
};
pub use verify::{verify_growth, GrowthReport, GrowthSample, GROWTH_FACTOR};

use crate::expr::GrowthClass;

/// A horizontal contour `Im z = imag_offset`, `|Re z| <= R`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub imag_offset: f64,
    pub radius: Radius,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Largest angular frequency `|ξ|` of an oscillatory factor; panels are
    /// kept shorter than `π/|ξ|`.
    #[serde(default)]
    pub frequency: f64,
}

impl Default for ContourSpec {
    fn default() -> Self {
        ContourSpec {
            imag_offset: 0.5,
            radius: Radius::Auto,
            abs_tol: 1e-11,
            max_subdivisions: 4000,
            frequency: 0.0,
        }
    }
}

impl ContourSpec {
    pub fn with_offset(mut self, eta: f64) -> Self {
        self.imag_offset = eta;
        self
    }

    pub fn with_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_radius(mut self, radius: Radius) -> Self {
        self.radius = radius;
        self
    }

    pub fn with_frequency(mut self, xi: f64) -> Self {
        self.frequency = xi.abs();
        self
    }

    /// Panel length cap implied by the oscillation frequency.
    pub fn max_panel(&self) -> f64 {
        if self.frequency > 0.0 {
            std::f64::consts::PI / self.frequency
        } else {
            f64::INFINITY
        }
    }

    pub(crate) fn adaptive(&self, abs_tol: f64) -> Adaptive {
        Adaptive {
            abs_tol,
            max_subdivisions: self.max_subdivisions,
            max_panel: self.max_panel(),
        }
    }
}

/// Value of a truncated contour integral with its certified error budget.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub tail_bound: f64,
    pub nodes_used: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            tail_bound: 0.0,
            nodes_used: 0,
        }
    }

    /// Total uncertainty: quadrature estimate plus tail bound.
    pub fn uncertainty(&self) -> f64 {
        self.error_estimate + self.tail_bound
    }
}

/// `∫ f(z) dz` along the straight segment from `z0` to `z1`.
pub fn integrate_path<F>(f: F, z0: Complex64, z1: Complex64, opts: Adaptive) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let len = (z1 - z0).norm();
    if len == 0.0 {
        return Ok(QuadResult::zero());
    }
    let u = (z1 - z0) / len;
    let r = gk::integrate(|t| Ok(f(z0 + u * t)? * u), 0.0, len, opts)?;
    Ok(QuadResult {
        value: r.value,
        error_estimate: r.error_estimate,
        tail_bound: 0.0,
        nodes_used: r.nodes_used,
    })
}

/// `∫ f(z) dz` over `Im z = η`, `-R <= Re z <= R`, left to right.
///
/// `tail` describes the integrand on the real axis outside `[-R, R]`; `None`
/// means it vanishes there (no tail). The returned tail bound is the bound at
/// the radius actually used.
pub fn integrate_line<F>(f: F, spec: &ContourSpec, tail: Option<&TailModel>) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let (r, bound) = resolve_radius(spec.radius, tail, spec.abs_tol, 0.0)?;
    let eta = spec.imag_offset;
    let mut q = integrate_path(
        f,
        Complex64::new(-r, eta),
        Complex64::new(r, eta),
        spec.adaptive(spec.abs_tol),
    )?;
    q.tail_bound = bound;
    Ok(q)
}

/// Convenience tail model for a declared class without polynomial weight.
pub fn class_tail(growth: GrowthClass, constant: f64) -> TailModel {
    TailModel::new(growth, 0.0, constant)
}

#[cfg(test)]
mod tests;
