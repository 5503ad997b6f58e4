use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::operator::{ln_norm, ComplexRational, PolyCoeffOperator};
use super::tail::{rising, FormalLaurentTail, TailKind};
use crate::{Error, Result};

/// Smallest fitted decay power `p` in `rₙ ≈ C n^{−p}` that counts as
/// tending to zero.
pub const ROOT_DECAY_POWER: f64 = 0.25;

/// Root test on a computed prefix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// `(|cₙ| n!)^{1/n}` for delta type, `|hₙ|^{1/n}` for finite-part type,
    /// `n = 1..N`; both are `|g_{n+1}|^{1/n}` on the tail.
    pub roots: Vec<f64>,
    /// Strictly decreasing over the second half of the prefix.
    pub decreasing: bool,
    /// `p` in the fit `rₙ ≈ C n^{−p}` over the second half.
    pub decay_power: f64,
    pub pass: bool,
}

/// The root test on `|g_{n+1}|^{1/n}`. It passes when the second half of
/// the prefix decreases strictly and decays at least like
/// `n^{−ROOT_DECAY_POWER}`; a geometric tail has power zero. At least four
/// roots are needed; an all-zero tail passes.
pub fn admissibility(s: &FormalLaurentTail) -> Admissibility {
    let n_top = s.max_degree().saturating_sub(1);
    let roots: Vec<f64> = (1..=n_top)
        .map(|n| (ln_norm(&s.coeffs[n + 1]) / n as f64).exp())
        .collect();
    if roots.iter().all(|&r| r == 0.0) {
        return Admissibility {
            roots,
            decreasing: true,
            decay_power: f64::INFINITY,
            pass: true,
        };
    }
    if roots.len() < 4 {
        return Admissibility {
            roots,
            decreasing: false,
            decay_power: f64::NAN,
            pass: false,
        };
    }
    let start = roots.len() / 2;
    let half = &roots[start..];
    let decreasing = half.windows(2).all(|w| w[1] < w[0]);
    // least squares −ln r ≈ p ln n − ln C
    let pts: Vec<(f64, f64)> = half
        .iter()
        .enumerate()
        .map(|(i, &r)| (((start + i + 1) as f64).ln(), -r.ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let decay_power = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    Admissibility {
        decreasing,
        decay_power,
        pass: decreasing && decay_power >= ROOT_DECAY_POWER,
        roots,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub kind: TailKind,
    pub operator: String,
    /// `cₙ` of `δ⁽ⁿ⁾`, or `hₙ` of `f.p. t^{−(n+1)}`, for `n = 0..N`.
    pub coefficients: Vec<ComplexRational>,
    pub tail: FormalLaurentTail,
    /// Finite-part type only: `remainder[k]` multiplies `τᵏ` in `L G`.
    pub remainder: Vec<ComplexRational>,
    /// Basis indices left free by the recurrence and set to zero.
    pub free: Vec<usize>,
    pub admissibility: Admissibility,
}

/// Coefficient of `g_n` in the `τ⁻ᵖ` component of `L G`.
fn weight(l: &PolyCoeffOperator, p: i64, n: usize) -> ComplexRational {
    let mut w = ComplexRational::zero();
    for t in &l.terms {
        if n as i64 + t.shift() != p {
            continue;
        }
        let r = rising(n, t.order);
        let r = BigRational::from_integer(if t.order % 2 == 0 { r } else { -r });
        w = w + &t.coeff * ComplexRational::new(r, BigRational::zero());
    }
    w
}

/// Solves `L Σ cₙ bₙ = 0` order by order for the basis `bₙ = δ⁽ⁿ⁾` or
/// `bₙ = f.p. t^{−(n+1)}`, with `c₀ = init`, up to `n = order`.
///
/// On the tail `gₙ` the `τ⁻ᵖ` equation determines the coefficient of
/// highest index, `g_{p+σ}` with `σ = −min(j − m)`; its weight is the pivot.
/// A zero pivot with a nonzero right side is a
/// [`Error::RecurrenceBreakdown`]. Indices the equations do not reach are
/// set to zero and listed in [`SeriesSolution::free`]. For the finite-part
/// basis the entire part of `L G` is returned as the remainder.
pub fn solve_series(
    l: &PolyCoeffOperator,
    kind: TailKind,
    init: ComplexRational,
    order: usize,
) -> Result<SeriesSolution> {
    let sigma = -l.min_shift();
    let top = order + 1;
    let mut g = vec![ComplexRational::zero(); top + 1];
    g[1] = init;
    let mut free = Vec::new();
    if sigma <= 0 {
        // g₁ sits in the equation p = 1 − σ on its own
        let w = weight(l, 1 - sigma, 1);
        if !w.is_zero() && !g[1].is_zero() {
            return Err(Error::InvalidArgument(format!(
                "no series solution with nonzero leading coefficient: the τ^-{} equation forces c0 = 0",
                1 - sigma
            )));
        }
    }
    for n in 2..=top {
        let p = n as i64 - sigma;
        if p < 1 {
            free.push(n - 1);
            continue;
        }
        let pivot = weight(l, p, n);
        let mut rest = ComplexRational::zero();
        for (k, gk) in g.iter().enumerate().take(n).skip(1) {
            if !gk.is_zero() {
                rest = rest + weight(l, p, k) * gk;
            }
        }
        if pivot.is_zero() {
            if rest.is_zero() {
                free.push(n - 1);
                continue;
            }
            return Err(Error::RecurrenceBreakdown { index: n - 1 });
        }
        g[n] = -rest / pivot;
    }
    let tail = FormalLaurentTail { kind, coeffs: g };
    let coefficients = match kind {
        TailKind::Delta => tail.delta_series(),
        TailKind::FinitePart => tail.coeffs[1..].to_vec(),
    };
    let remainder = match kind {
        TailKind::Delta => Vec::new(),
        TailKind::FinitePart => {
            let depth = l.max_power();
            (0..=depth)
                .map(|k| {
                    let p = -(k as i64);
                    (1..=top).fold(ComplexRational::zero(), |acc, n| {
                        if tail.coeffs[n].is_zero() {
                            acc
                        } else {
                            acc + weight(l, p, n) * &tail.coeffs[n]
                        }
                    })
                })
                .collect()
        }
    };
    let admissibility = admissibility(&tail);
    Ok(SeriesSolution {
        kind,
        operator: l.to_string(),
        coefficients,
        tail,
        remainder,
        free,
        admissibility,
    })
}

/// Adds the constant `g₀` that cancels a constant remainder of a
/// finite-part solution: `L g₀ = λ g₀` with `λ` the `t⁰D⁰` coefficient, so
/// `g₀ = −r₀/λ`. Fails when the remainder has higher powers, or when `L`
/// does not map constants to constants.
pub fn compensate_constant(l: &PolyCoeffOperator, sol: &SeriesSolution) -> Result<FormalLaurentTail> {
    if sol.kind != TailKind::FinitePart {
        return Err(Error::InvalidArgument("only finite-part solutions carry a constant term".into()));
    }
    if sol.remainder.iter().skip(1).any(|c| !c.is_zero()) {
        return Err(Error::InvalidArgument(
            "the remainder has nonconstant polynomial terms; a constant cannot cancel it".into(),
        ));
    }
    if l.terms.iter().any(|t| t.order == 0 && t.power > 0) {
        return Err(Error::InvalidArgument(format!("`{l}` does not map constants to constants")));
    }
    let lambda = weight(l, 0, 0);
    let r0 = sol.remainder.first().cloned().unwrap_or_else(ComplexRational::zero);
    let mut tail = sol.tail.clone();
    if r0.is_zero() {
        return Ok(tail);
    }
    if lambda.is_zero() {
        return Err(Error::InvalidArgument(format!("`{l}` annihilates constants; the remainder stays")));
    }
    tail.coeffs[0] = -r0 / lambda;
    Ok(tail)
}
