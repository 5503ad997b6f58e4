use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::function::{check_direction, factorial, DeltaCombo};
use crate::spectral::MomentSequence;
use crate::{Error, Result};

/// Largest allowed `log|Σ(q)|` residual about the fitted curve.
pub const SUPPORT_RESIDUAL: f64 = 1.0;

/// Relative size of the certified tail below which a sample counts as
/// certified.
pub const SUPPORT_TAIL_FRACTION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportOptions {
    /// The half-width `S` of the period.
    pub half_width: f64,
    pub eps: Vec<f64>,
    pub q_max: usize,
    /// Moments past the supplied ones are zero.
    pub complete: bool,
}

impl SupportOptions {
    pub fn new(half_width: f64) -> Self {
        SupportOptions {
            half_width,
            eps: vec![1e-3, 1e-2, 1e-1, 0.5],
            q_max: 8,
            complete: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportSample {
    pub q: i64,
    pub value: Complex64,
    /// Bound on the discarded part of the series.
    pub tail: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsVerdict {
    pub eps: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportReport {
    pub label: String,
    pub half_width: f64,
    /// Every sample's truncation is covered by the declared bound.
    pub certified: bool,
    pub samples: Vec<SupportSample>,
    /// `r` in `log|Σ(q)| ≈ c + r|q| + p log|q|`.
    pub fitted_rate: f64,
    pub fitted_power: f64,
    pub fitted_constant: f64,
    pub max_residual: f64,
    pub verdicts: Vec<EpsVerdict>,
    pub diagnosis: Option<String>,
}

impl SupportReport {
    pub fn pass(&self) -> bool {
        self.diagnosis.is_none() && self.verdicts.iter().all(|v| v.pass)
    }

    fn divergent(label: &str, opts: &SupportOptions, why: String) -> Self {
        SupportReport {
            label: label.to_string(),
            half_width: opts.half_width,
            certified: false,
            samples: Vec::new(),
            fitted_rate: f64::INFINITY,
            fitted_power: f64::NAN,
            fitted_constant: f64::NAN,
            max_residual: f64::INFINITY,
            verdicts: opts.eps.iter().map(|&eps| EpsVerdict { eps, pass: false }).collect(),
            diagnosis: Some(why),
        }
    }
}

/// `log` of the `k`-th term magnitude `|μᵏ| xᵏ/k!`, or `−∞` for zero terms.
fn log_term(mu: Complex64, x: f64, k: usize) -> f64 {
    let m = mu.norm();
    if m == 0.0 {
        return f64::NEG_INFINITY;
    }
    m.ln() + k as f64 * x.ln() - factorial(k).ln()
}

/// Ratio test on the terms at `q = 1`: the series diverges when every
/// consecutive term ratio over the last quarter of the supplied moments
/// exceeds one and the ratios do not decrease.
fn ratio_diagnosis(mu: &[Complex64], x: f64) -> Option<String> {
    let logs: Vec<(usize, f64)> = mu
        .iter()
        .enumerate()
        .map(|(k, &m)| (k, log_term(m, x, k)))
        .filter(|(_, l)| l.is_finite())
        .collect();
    if logs.len() < 4 {
        return None;
    }
    let start = logs.len() - (logs.len() / 4).max(3);
    let ratios: Vec<f64> = logs[start..]
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0) as f64)
        .collect();
    let growing = ratios.iter().all(|&r| r > 0.0) && ratios.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    growing.then(|| {
        format!(
            "series diverges: at q = 1 the term ratio exceeds one and keeps growing (log-ratio {:.3} at k = {})",
            ratios.last().copied().unwrap_or(f64::NAN),
            logs.last().map_or(0, |l| l.0)
        )
    })
}

/// Least squares for `y = c + r|q| + p log|q|`; returns `(c, r, p)`.
fn fit_growth(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for &(q, y) in points {
        let row = [1.0, q, q.ln()];
        for i in 0..3 {
            for j in 0..3 {
                a[i][j] += row[i] * row[j];
            }
            b[i] += row[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap_or(col);
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let s: f64 = (i + 1..3).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    (x[0], x[1], x[2])
}

/// `Σ(q) = Σ_k μᵏ/k! · (1/2S)(−πiq/S)ᵏ` for `0 < |q| ≤ q_max`, with the
/// growth of `log|Σ(q)|` fitted as `c + r|q| + p log|q|`.
///
/// A declared bound `|μᵏ| ≤ M Rᵏ` certifies the discarded tail past the
/// supplied moments; a violated bound is an error. Without a bound the
/// ratio test decides whether the series can be summed at all, and the
/// result is uncertified. The check passes for `ε` when `r ≤ ε` and every
/// residual is at most [`SUPPORT_RESIDUAL`], so polynomial growth passes.
pub fn support_check(mu: &MomentSequence, opts: &SupportOptions) -> Result<SupportReport> {
    mu.check()?;
    let s = opts.half_width;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidArgument(format!("half-width must be positive, got {s}")));
    }
    if opts.q_max < 4 {
        return Err(Error::InvalidArgument(format!(
            "q_max = {} leaves too few samples for the growth fit (need at least 4)",
            opts.q_max
        )));
    }
    let values = &mu.values;
    let big_k = values.len() - 1;
    if mu.bound.is_none() && !opts.complete {
        if let Some(why) = ratio_diagnosis(values, PI / s) {
            return Ok(SupportReport::divergent(&mu.label, opts, why));
        }
    }
    let mut samples = Vec::with_capacity(2 * opts.q_max);
    let mut certified = true;
    for q in -(opts.q_max as i64)..=(opts.q_max as i64) {
        if q == 0 {
            continue;
        }
        let y = Complex64::new(0.0, -PI * q as f64 / s);
        let mut power = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, m) in values.iter().enumerate() {
            if k > 0 {
                power *= y / k as f64;
            }
            sum += m * power;
        }
        let sum = sum / (2.0 * s);
        let x = PI * (q.unsigned_abs() as f64) / s;
        let tail = if opts.complete {
            0.0
        } else if let Some((m_bound, r)) = mu.bound {
            // M Σ_{k>K} (Rx)ᵏ/k! ≤ M (Rx)^{K+1}/(K+1)! / (1 − Rx/(K+2))
            let rx = r * x;
            if rx < (big_k + 2) as f64 {
                let lead = ((big_k + 1) as f64 * rx.ln() - factorial(big_k + 1).ln()).exp();
                m_bound * lead / (1.0 - rx / (big_k + 2) as f64) / (2.0 * s)
            } else {
                f64::INFINITY
            }
        } else {
            // uncertified: size of the last supplied term
            log_term(values[big_k], x, big_k).exp() / (2.0 * s)
        };
        if mu.bound.is_none() && !opts.complete || tail > SUPPORT_TAIL_FRACTION * sum.norm().max(1e-300) {
            certified = false;
        }
        samples.push(SupportSample { q, value: sum, tail });
    }
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|p| p.value.norm() > 0.0)
        .map(|p| (p.q.unsigned_abs() as f64, p.value.norm().ln()))
        .collect();
    let (c, r, p, max_residual) = if points.len() < 4 {
        // identically zero: no growth at all
        (f64::NEG_INFINITY, 0.0, 0.0, 0.0)
    } else {
        let (c, r, p) = fit_growth(&points);
        let res = points
            .iter()
            .map(|&(q, y)| (y - c - r * q - p * q.ln()).abs())
            .fold(0.0, f64::max);
        (c, r, p, res)
    };
    let verdicts = opts
        .eps
        .iter()
        .map(|&eps| EpsVerdict {
            eps,
            pass: r <= eps && max_residual <= SUPPORT_RESIDUAL,
        })
        .collect();
    let diagnosis = (!certified && mu.bound.is_some())
        .then(|| "declared bound does not cover the truncation; supply more moments".to_string());
    Ok(SupportReport {
        label: mu.label.clone(),
        half_width: s,
        certified,
        samples,
        fitted_rate: r,
        fitted_power: p,
        fitted_constant: c,
        max_residual,
        verdicts,
        diagnosis,
    })
}

/// Number of slice moments summed for a point input at half-width `S`.
fn moments_needed(radius: f64, s: f64, q_max: usize) -> usize {
    let x = radius * PI * q_max as f64 / s;
    ((std::f64::consts::E * x).ceil() as usize + 40).clamp(40, 300)
}

/// [`support_check`] on the slices `ℛf(ω,·)` of a point input, using its
/// closed-form slice moments and [`DeltaCombo::moment_bound`].
pub fn support_check_slices(f: &DeltaCombo, directions: &[Vec<f64>], opts: &SupportOptions) -> Result<Vec<SupportReport>> {
    let (m, r) = f.moment_bound();
    let count = moments_needed(r, opts.half_width, opts.q_max);
    directions
        .iter()
        .map(|w| {
            check_direction(w, f.dim)?;
            let values: Vec<Complex64> = (0..=count).map(|k| f.slice_moment(w, k)).collect();
            let mut seq = MomentSequence::new(format!("{}({w:?})", f.label), values);
            seq.bound = Some((m, r));
            support_check(&seq, opts)
        })
        .collect()
}
