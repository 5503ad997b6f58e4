use serde::{Deserialize, Serialize};

use crate::error::QuadFailure;
use crate::expr::GrowthClass;
use crate::Result;

/// Largest radius the automatic truncation will try.
pub const MAX_AUTO_RADIUS: f64 = 1.0e4;
/// First radius tried by the automatic truncation.
pub const START_AUTO_RADIUS: f64 = 8.0;
const AUTO_GROWTH: f64 = 1.25;

/// Envelope of an integrand on the real axis outside `[-R, R]`:
/// `|g(x)| <= constant * envelope(growth, x) * |x|^weight`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub growth: GrowthClass,
    pub weight: f64,
    pub constant: f64,
}

impl TailModel {
    pub fn new(growth: GrowthClass, weight: f64, constant: f64) -> Self {
        TailModel {
            growth,
            weight,
            constant,
        }
    }

    pub fn bound(&self, radius: f64) -> Result<f64> {
        Ok(self.constant * tail_bound(self.growth, self.weight, radius)?)
    }
}

// Upper bound for the upper incomplete gamma function Γ(s, y).
fn upper_gamma_bound(s: f64, y: f64) -> f64 {
    if s <= 1.0 {
        // t^{s-1} <= y^{s-1} on [y, ∞)
        return y.powf(s - 1.0) * (-y).exp();
    }
    let q = (s - 1.0) / y;
    if q >= 1.0 {
        return f64::INFINITY;
    }
    y.powf(s - 1.0) * (-y).exp() / (1.0 - q)
}

/// Upper bound for `∫_{|x|>R} env(x) |x|^weight dx` with unit class constant.
///
/// `Asymptotic` is bounded as `Tempered(-(weight + 2))`, so the bound is
/// `2/R` whatever the weight. Infra-exponential and non-integrable tempered
/// tails are reported as divergent.
pub fn tail_bound(growth: GrowthClass, weight: f64, radius: f64) -> Result<f64> {
    let r = radius.max(1.0);
    match growth {
        GrowthClass::ExponentialDecay(d) => {
            let s = weight + 1.0;
            let y = d * r;
            Ok(2.0 * d.powf(-s) * upper_gamma_bound(s, y))
        }
        GrowthClass::Tempered(g) => {
            let e = g + weight;
            if e >= -1.0 {
                return Err(QuadFailure::DivergentTail { exponent: e }.into());
            }
            Ok(2.0 * r.powf(e + 1.0) / (-e - 1.0))
        }
        GrowthClass::Asymptotic => Ok(2.0 / r),
        GrowthClass::InfraExponential => Err(QuadFailure::DivergentTail {
            exponent: f64::INFINITY,
        }
        .into()),
    }
}

/// Truncation radius request.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Radius {
    Fixed(f64),
    Auto,
}

impl Serialize for Radius {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Radius::Fixed(r) => s.serialize_f64(*r),
            Radius::Auto => s.serialize_str("auto"),
        }
    }
}

impl<'de> Deserialize<'de> for Radius {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(r) if r > 0.0 => Ok(Radius::Fixed(r)),
            Raw::Num(r) => Err(serde::de::Error::custom(format!(
                "truncation radius must be positive, got {r}"
            ))),
            Raw::Text(t) if t == "auto" => Ok(Radius::Auto),
            Raw::Text(t) => Err(serde::de::Error::custom(format!(
                "truncation radius must be a number or \"auto\", got {t:?}"
            ))),
        }
    }
}

/// Chooses the truncation radius and its tail bound.
///
/// `tail = None` means the integrand vanishes on the real axis outside
/// `min_radius`. A fixed radius fails when its tail bound exceeds `abs_tol`;
/// the automatic radius grows geometrically until the bound is below
/// `abs_tol / 10`.
pub fn resolve_radius(
    radius: Radius,
    tail: Option<&TailModel>,
    abs_tol: f64,
    min_radius: f64,
) -> Result<(f64, f64)> {
    match (radius, tail) {
        (Radius::Fixed(r), None) => Ok((r.max(min_radius), 0.0)),
        (Radius::Auto, None) => Ok((START_AUTO_RADIUS.max(min_radius + 1.0), 0.0)),
        (Radius::Fixed(r), Some(t)) => {
            let bound = t.bound(r)?;
            if bound > abs_tol {
                return Err(QuadFailure::TailNotAchievable {
                    radius: r,
                    bound,
                    abs_tol,
                }
                .into());
            }
            Ok((r, bound))
        }
        (Radius::Auto, Some(t)) => {
            let mut r = START_AUTO_RADIUS.max(min_radius + 1.0);
            loop {
                let bound = t.bound(r)?;
                if bound <= abs_tol / 10.0 {
                    return Ok((r, bound));
                }
                if r >= MAX_AUTO_RADIUS {
                    return Err(QuadFailure::TailNotAchievable {
                        radius: r,
                        bound,
                        abs_tol,
                    }
                    .into());
                }
                r = (r * AUTO_GROWTH).min(MAX_AUTO_RADIUS);
            }
        }
    }
}
