use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::operator::{render_complex, to_complex64, ComplexRational, PolyCoeffOperator};
use crate::{Error, Result};

/// How a Laurent tail `G` becomes a hyperfunction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailKind {
    /// `F₊ = F₋ = G`, a point-supported series `Σ cₙ δ⁽ⁿ⁾`.
    Delta,
    /// `F₊ = G`, `F₋ = −G`, a finite-part series `Σ cₙ f.p. t⁻ⁿ`.
    #[serde(rename = "fp")]
    FinitePart,
}

impl TailKind {
    /// `κ` in `G(τ) = κ Σ gₙ τ⁻ⁿ`: `−1/2πi` for delta type, `1/2` for
    /// finite-part type.
    pub fn prefactor(self) -> Complex64 {
        match self {
            TailKind::Delta => Complex64::new(0.0, 1.0 / (2.0 * PI)),
            TailKind::FinitePart => Complex64::new(0.5, 0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TailKind::Delta => "delta",
            TailKind::FinitePart => "fp",
        }
    }
}

impl std::str::FromStr for TailKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta" => Ok(TailKind::Delta),
            "fp" => Ok(TailKind::FinitePart),
            other => Err(Error::InvalidArgument(format!("unknown series basis `{other}` (expected delta or fp)"))),
        }
    }
}

/// The defining function `G(τ) = κ Σ_{n=0}^{N} gₙ τ⁻ⁿ` of a series
/// hyperfunction, with exact coefficients and `κ` from [`TailKind`].
///
/// With this normalisation `δ⁽ⁿ⁾` has `g_{n+1} = (−1)ⁿ n!` and
/// `f.p. t⁻ⁿ` has `gₙ = 1`; the constant `g₀` is the constant function for
/// finite-part type and is dropped for delta type, where it is the zero
/// hyperfunction.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalLaurentTail {
    pub kind: TailKind,
    /// `coeffs[n]` multiplies `τ⁻ⁿ`.
    pub coeffs: Vec<ComplexRational>,
}

pub(crate) fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn signed_factorial(n: usize) -> ComplexRational {
    let f = BigRational::from_integer(factorial(n));
    let f = if n % 2 == 0 { f } else { -f };
    ComplexRational::new(f, BigRational::zero())
}

/// `n(n+1)…(n+j−1)`.
pub(crate) fn rising(n: usize, j: usize) -> BigInt {
    (0..j).fold(BigInt::one(), |acc, k| acc * BigInt::from(n + k))
}

impl FormalLaurentTail {
    pub fn zero(kind: TailKind, max_degree: usize) -> Self {
        FormalLaurentTail {
            kind,
            coeffs: vec![ComplexRational::zero(); max_degree + 1],
        }
    }

    /// Truncation order `N_max`.
    pub fn max_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Σ cₙ δ⁽ⁿ⁾` for `n < c.len()`.
    pub fn from_delta_series(c: &[ComplexRational]) -> Self {
        let mut out = FormalLaurentTail::zero(TailKind::Delta, c.len());
        for (n, cn) in c.iter().enumerate() {
            out.coeffs[n + 1] = cn * signed_factorial(n);
        }
        out
    }

    /// `Σ cₙ f.p. t⁻ⁿ` with `c[0]` the constant.
    pub fn from_fp_series(c: &[ComplexRational]) -> Self {
        let mut coeffs = c.to_vec();
        if coeffs.is_empty() {
            coeffs.push(ComplexRational::zero());
        }
        FormalLaurentTail {
            kind: TailKind::FinitePart,
            coeffs,
        }
    }

    /// Coefficients `cₙ` of `δ⁽ⁿ⁾`, `n = 0..N_max−1`.
    pub fn delta_series(&self) -> Vec<ComplexRational> {
        (1..self.coeffs.len())
            .map(|n| &self.coeffs[n] / signed_factorial(n - 1))
            .collect()
    }

    /// Coefficients of `f.p. t⁻ⁿ`, `n = 0..N_max`.
    pub fn fp_series(&self) -> Vec<ComplexRational> {
        self.coeffs.clone()
    }

    /// The same series with `extra` more zero coefficients.
    pub fn padded(&self, extra: usize) -> Self {
        let mut out = self.clone();
        out.coeffs.extend(std::iter::repeat(ComplexRational::zero()).take(extra));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(n, c)| c.is_zero() || (n == 0 && self.kind == TailKind::Delta))
    }

    /// `G(z)` in floating point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = 1.0 / z;
        let start = if self.kind == TailKind::Delta { 1 } else { 0 };
        // Horner in w = 1/z
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (start..self.coeffs.len()).rev() {
            acc = acc * w + to_complex64(&self.coeffs[n]);
        }
        if start == 1 {
            acc *= w;
        }
        self.kind.prefactor() * acc
    }

    /// Nonzero coefficients as `(n, exact, decimal)`.
    pub fn rows(&self) -> Vec<(usize, String, Complex64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(n, c)| !c.is_zero() && !(*n == 0 && self.kind == TailKind::Delta))
            .map(|(n, c)| (n, render_complex(c), to_complex64(c)))
            .collect()
    }
}

/// `L G` on the defining function, term by term with
/// `(d/dτ)ʲ τ⁻ⁿ = (−1)ʲ n(n+1)…(n+j−1) τ^{−n−j}` and `τᵐ τ⁻ⁿ = τ^{−(n−m)}`.
///
/// Delta-type results drop entire parts, which are the zero hyperfunction.
/// A degree past `N_max` is a [`Error::TruncationOverflow`]; a positive
/// power of `τ` in a finite-part tail is outside the representation and
/// rejected.
pub fn apply_operator(l: &PolyCoeffOperator, s: &FormalLaurentTail) -> Result<FormalLaurentTail> {
    let max = s.max_degree();
    let mut out = FormalLaurentTail::zero(s.kind, max);
    for (n, g) in s.coeffs.iter().enumerate() {
        if g.is_zero() || (n == 0 && s.kind == TailKind::Delta) {
            continue;
        }
        for t in &l.terms {
            let r = rising(n, t.order);
            if r.is_zero() {
                continue;
            }
            let p = n as i64 + t.shift();
            if p > max as i64 {
                return Err(Error::TruncationOverflow { degree: p as usize, max });
            }
            if p < 0 || (p == 0 && s.kind == TailKind::Delta) {
                if s.kind == TailKind::FinitePart {
                    return Err(Error::InvalidArgument(format!(
                        "t^{}*D^{} maps τ^-{n} to the polynomial τ^{}, outside a finite-part tail",
                        t.power,
                        t.order,
                        -p
                    )));
                }
                continue;
            }
            let r = BigRational::from_integer(if t.order % 2 == 0 { r } else { -r });
            let v = g * &t.coeff * ComplexRational::new(r, BigRational::zero());
            let slot = &mut out.coeffs[p as usize];
            *slot = &*slot + v;
        }
    }
    Ok(out)
}
