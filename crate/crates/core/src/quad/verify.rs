use serde::{Deserialize, Serialize};

use crate::expr::{Expr, GrowthClass};

/// Factor by which a sample may exceed the claimed envelope.
pub const GROWTH_FACTOR: f64 = 10.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthSample {
    pub x: f64,
    pub magnitude: f64,
    pub envelope: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub claimed: GrowthClass,
    pub pass: bool,
    /// Largest `|e(x)| / envelope(x)` seen.
    pub worst_ratio: f64,
    /// First sample exceeding the allowed factor, if any.
    pub first_violation: Option<f64>,
    pub samples: Vec<GrowthSample>,
}

/// Spot-checks a declared growth class at `x = ±r` for each sampled radius.
///
/// Fails if `|e(x)|` exceeds the unit-constant envelope of `claimed` by more
/// than [`GROWTH_FACTOR`], or if `e` cannot be evaluated there.
pub fn verify_growth(e: &Expr, claimed: GrowthClass, sample_radii: &[f64]) -> GrowthReport {
    let mut samples = Vec::with_capacity(2 * sample_radii.len());
    let mut worst: f64 = 0.0;
    let mut first_violation = None;
    for &r in sample_radii {
        for x in [-r, r] {
            let magnitude = e.eval_real(&[x]).map(|v| v.norm()).unwrap_or(f64::INFINITY);
            let envelope = claimed.envelope(x);
            let ratio = if magnitude == 0.0 { 0.0 } else { magnitude / envelope };
            let ratio = if ratio.is_nan() { f64::INFINITY } else { ratio };
            worst = worst.max(ratio);
            if ratio > GROWTH_FACTOR && first_violation.is_none() {
                first_violation = Some(x);
            }
            samples.push(GrowthSample {
                x,
                magnitude,
                envelope,
            });
        }
    }
    GrowthReport {
        claimed,
        pass: first_violation.is_none(),
        worst_ratio: worst,
        first_violation,
        samples,
    }
}
