use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::function::{
    check_direction, degree, monomial, multi_factorial, multi_indices, DeltaCombo, MultiDimFunction, MultiIndex,
};
use super::slice::radon_transform;
use crate::quad::{integrate_box, ContourSpec};
use crate::spectral::{remainder_moments, AsymptoticSum, MomentSequence};
use crate::{Error, Result};

/// Highest Helgason degree computed by default.
pub const DEFAULT_HELGASON_CAP: usize = 8;

/// Number of random directions used to cross-check each polynomial.
pub const HELGASON_CHECK_DIRECTIONS: usize = 3;

/// Agreement required between a polynomial and the direct slice moment,
/// relative to `1 + |moment|`.
pub const HELGASON_TOLERANCE: f64 = 1e-5;

/// `p(ω) = Σ_{|α|=k} c_α ω^α`.
///
/// Every stored multi-index has total degree `k`, so `p(sv) = sᵏp(v)` and
/// `p(−ω) = (−1)ᵏp(ω)` hold by construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousPoly {
    pub dim: usize,
    pub degree: usize,
    pub coeffs: Vec<(MultiIndex, Complex64)>,
}

impl HomogeneousPoly {
    pub fn new(dim: usize, degree: usize, coeffs: Vec<(MultiIndex, Complex64)>) -> Result<Self> {
        for (alpha, _) in &coeffs {
            if alpha.len() != dim || super::function::degree(alpha) != degree {
                return Err(Error::InvalidArgument(format!(
                    "multi-index {alpha:?} does not have degree {degree} in dimension {dim}"
                )));
            }
        }
        Ok(HomogeneousPoly { dim, degree, coeffs })
    }

    pub fn eval(&self, omega: &[f64]) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(alpha, c)| c * monomial(alpha, omega))
            .sum()
    }

    pub fn coefficient(&self, alpha: &[usize]) -> Complex64 {
        self.coeffs
            .iter()
            .find(|(a, _)| a.as_slice() == alpha)
            .map_or(Complex64::new(0.0, 0.0), |(_, c)| *c)
    }

    /// `p(−ω) = (−1)ᵏp(ω)` exactly, in floating point.
    pub fn parity_holds(&self, omega: &[f64]) -> bool {
        let flipped: Vec<f64> = omega.iter().map(|x| -x).collect();
        let b = self.eval(&flipped);
        let b = if self.degree % 2 == 0 { b } else { -b };
        self.eval(omega) == b
    }

    /// `|p(sv) − sᵏp(v)| / (1 + |sᵏp(v)|)`; zero up to rounding.
    pub fn homogeneity_defect(&self, v: &[f64], s: f64) -> f64 {
        let scaled: Vec<f64> = v.iter().map(|x| s * x).collect();
        let want = self.eval(v) * s.powi(self.degree as i32);
        (self.eval(&scaled) - want).norm() / (1.0 + want.norm())
    }

    /// `degree,multi_index,re,im` rows, the multi-index joined by `-`.
    pub fn csv_rows(&self) -> Vec<String> {
        self.coeffs
            .iter()
            .map(|(alpha, c)| {
                let idx: Vec<String> = alpha.iter().map(|a| a.to_string()).collect();
                format!("{},{},{:e},{:e}", self.degree, idx.join("-"), c.re, c.im)
            })
            .collect()
    }
}

/// `μ^α(f) = ∫ x^α f(x) dx` for every `|α| = k`.
pub fn multi_moments(f: &MultiDimFunction, k: usize, spec: &ContourSpec) -> Result<Vec<(MultiIndex, Complex64)>> {
    let indices = multi_indices(f.dim(), k);
    match f {
        MultiDimFunction::SmoothRapid(g) => {
            let radius = g.truncation_radius(spec.abs_tol)?;
            let bounds = vec![(-radius, radius); g.dim];
            indices
                .into_iter()
                .map(|alpha| {
                    let q = integrate_box(
                        |x| Ok(g.eval(x)? * monomial(&alpha, x)),
                        &bounds,
                        spec.abs_tol,
                        spec.max_subdivisions,
                    )?;
                    Ok((alpha, q.value))
                })
                .collect()
        }
        MultiDimFunction::DeltaCombo(d) => Ok(indices
            .into_iter()
            .map(|alpha| {
                let m = d.multi_moment(&alpha);
                (alpha, m)
            })
            .collect()),
    }
}

/// Direct slice moment against the polynomial at one direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelgasonCheck {
    pub direction: Vec<f64>,
    pub direct: Complex64,
    pub polynomial: Complex64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HelgasonMoment {
    pub poly: HomogeneousPoly,
    pub checks: Vec<HelgasonCheck>,
}

impl HelgasonMoment {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Uniformly distributed unit vectors from a seeded generator.
pub fn random_directions(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| match dim {
            1 => vec![if rng.gen::<bool>() { 1.0 } else { -1.0 }],
            2 => {
                let t = 2.0 * PI * rng.gen::<f64>();
                vec![t.cos(), t.sin()]
            }
            _ => {
                let z: f64 = 2.0 * rng.gen::<f64>() - 1.0;
                let t = 2.0 * PI * rng.gen::<f64>();
                let r = (1.0 - z * z).sqrt();
                let v = [r * t.cos(), r * t.sin(), z];
                let s = super::function::norm(&v);
                v.iter().map(|x| x / s).collect()
            }
        })
        .collect()
}

fn polynomial_from_moments(dim: usize, k: usize, mu: Vec<(MultiIndex, Complex64)>) -> Result<HomogeneousPoly> {
    let k_fact = super::function::factorial(k);
    let coeffs = mu
        .into_iter()
        .map(|(alpha, m)| {
            let c = k_fact / multi_factorial(&alpha);
            (alpha, m * c)
        })
        .collect();
    HomogeneousPoly::new(dim, k, coeffs)
}

/// Helgason polynomials `p⁰..p^max` with `p^k(ω) = Σ_{|α|=k} (k!/α!)μ^α ω^α`,
/// each compared with the direct `t`-moment of the slice at the same three
/// seeded random directions.
pub fn helgason_moments(
    f: &MultiDimFunction,
    max_degree: usize,
    cap: usize,
    seed: u64,
    spec: &ContourSpec,
) -> Result<Vec<HelgasonMoment>> {
    if max_degree > cap {
        return Err(Error::InvalidArgument(format!(
            "Helgason degree {max_degree} exceeds the cap {cap}"
        )));
    }
    let directions = random_directions(f.dim(), HELGASON_CHECK_DIRECTIONS, seed);
    let slices = directions
        .iter()
        .map(|w| radon_transform(f, w, spec))
        .collect::<Result<Vec<_>>>()?;
    (0..=max_degree)
        .map(|k| {
            let poly = polynomial_from_moments(f.dim(), k, multi_moments(f, k, spec)?)?;
            let checks = slices
                .iter()
                .map(|s| {
                    let direct = s.moment(k, spec)?;
                    let polynomial = poly.eval(&s.direction);
                    Ok(HelgasonCheck {
                        direction: s.direction.clone(),
                        direct,
                        polynomial,
                        pass: (direct - polynomial).norm() <= HELGASON_TOLERANCE * (1.0 + direct.norm()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(HelgasonMoment { poly, checks })
        })
        .collect()
}

/// The single polynomial `p^k`; see [`helgason_moments`].
pub fn helgason_moment(f: &MultiDimFunction, k: usize, seed: u64, spec: &ContourSpec) -> Result<HelgasonMoment> {
    if k > DEFAULT_HELGASON_CAP {
        return Err(Error::InvalidArgument(format!(
            "Helgason degree {k} exceeds the cap {DEFAULT_HELGASON_CAP}"
        )));
    }
    let directions = random_directions(f.dim(), HELGASON_CHECK_DIRECTIONS, seed);
    let poly = polynomial_from_moments(f.dim(), k, multi_moments(f, k, spec)?)?;
    let checks = directions
        .iter()
        .map(|w| {
            let direct = radon_transform(f, w, spec)?.moment(k, spec)?;
            let polynomial = poly.eval(w);
            Ok(HelgasonCheck {
                direction: w.clone(),
                direct,
                polynomial,
                pass: (direct - polynomial).norm() <= HELGASON_TOLERANCE * (1.0 + direct.norm()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HelgasonMoment { poly, checks })
}

/// The Radon expansion at one direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadonExpansion {
    pub direction: Vec<f64>,
    /// `(−1)ᵏ/k! · p^k(ω)`, the coefficient of `δ⁽ᵏ⁾(t)`.
    pub coefficients: Vec<Complex64>,
    /// `Σ_{|α|=k} (−i)ᵏ a_α ω^α` with `a_α` the Taylor coefficients of `f̂`
    /// at the origin.
    pub second_form: Vec<Complex64>,
    /// `t`-moments `0..=N` of `ℛf(ω,·)` minus the partial sum.
    pub remainder_moments: Vec<Complex64>,
}

impl RadonExpansion {
    pub fn max_remainder(&self) -> f64 {
        self.remainder_moments.iter().map(|m| m.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient-wise gap between the two displayed forms.
    pub fn form_gap(&self) -> f64 {
        self.coefficients
            .iter()
            .zip(&self.second_form)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn sum(&self) -> AsymptoticSum {
        AsymptoticSum {
            label: format!("S[R]({:?})", self.direction),
            order: self.coefficients.len().saturating_sub(1),
            moments: self
                .coefficients
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                    c * s * super::function::factorial(k)
                })
                .collect(),
            coefficients: self.coefficients.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadonAsymptotic {
    pub label: String,
    pub order: usize,
    pub polys: Vec<HomogeneousPoly>,
    pub expansions: Vec<RadonExpansion>,
}

/// `ℛf(ω,t) ∼ Σ_{k≤N} (−1)ᵏ/k! p^k(ω) δ⁽ᵏ⁾(t)` at each direction, with the
/// remainder's `t`-moments.
pub fn radon_asymptotic_sum(
    f: &MultiDimFunction,
    order: usize,
    directions: &[Vec<f64>],
    spec: &ContourSpec,
) -> Result<RadonAsymptotic> {
    if order > DEFAULT_HELGASON_CAP {
        return Err(Error::InvalidArgument(format!(
            "expansion order {order} exceeds the cap {DEFAULT_HELGASON_CAP}"
        )));
    }
    let mus = (0..=order)
        .map(|k| multi_moments(f, k, spec))
        .collect::<Result<Vec<_>>>()?;
    let polys = mus
        .iter()
        .enumerate()
        .map(|(k, mu)| polynomial_from_moments(f.dim(), k, mu.clone()))
        .collect::<Result<Vec<_>>>()?;
    // a_α = D^α f̂(0)/α! = (−i)^{|α|} μ^α/α!
    let minus_i = Complex64::new(0.0, -1.0);
    let taylor: Vec<Vec<(MultiIndex, Complex64)>> = mus
        .iter()
        .map(|mu| {
            mu.iter()
                .map(|(alpha, m)| (alpha.clone(), minus_i.powu(degree(alpha) as u32) * m / multi_factorial(alpha)))
                .collect()
        })
        .collect();
    let expansions = directions
        .iter()
        .map(|w| {
            check_direction(w, f.dim())?;
            let values: Vec<Complex64> = polys.iter().map(|p| p.eval(w)).collect();
            let sum = AsymptoticSum::from_moments(&MomentSequence::new(f.label(), values));
            let second_form = taylor
                .iter()
                .enumerate()
                .map(|(k, a)| {
                    a.iter()
                        .map(|(alpha, c)| minus_i.powu(k as u32) * c * monomial(alpha, w))
                        .sum()
                })
                .collect();
            let slice = radon_transform(f, w, spec)?;
            let remainder = remainder_moments(&slice.hyper, &sum, order, spec)?;
            Ok(RadonExpansion {
                direction: w.clone(),
                coefficients: sum.coefficients,
                second_form,
                remainder_moments: remainder,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RadonAsymptotic {
        label: f.label().to_string(),
        order,
        polys,
        expansions,
    })
}

/// A homogeneous polynomial in `ω` with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoly {
    pub dim: usize,
    pub degree: usize,
    pub coeffs: BTreeMap<MultiIndex, BigRational>,
}

impl RationalPoly {
    fn zero(dim: usize, degree: usize) -> Self {
        RationalPoly {
            dim,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    fn add(&mut self, alpha: MultiIndex, c: BigRational) {
        let slot = self.coeffs.entry(alpha.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&alpha);
        }
    }

    pub fn coefficient(&self, alpha: &[usize]) -> BigRational {
        self.coeffs.get(alpha).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `(multi-index, "p/q")` pairs.
    pub fn render(&self) -> Vec<(MultiIndex, String)> {
        self.coeffs.iter().map(|(a, c)| (a.clone(), c.to_string())).collect()
    }
}

/// Exact rational value of a binary floating-point number.
pub fn exact_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::InvalidArgument(format!("{x} has no rational value")))
}

fn exact_real(c: Complex64) -> Result<BigRational> {
    if c.im != 0.0 {
        return Err(Error::InvalidArgument(format!(
            "exact expansion needs real coefficients, got {c}"
        )));
    }
    exact_rational(c.re)
}

fn rational_factorial(n: usize) -> BigRational {
    BigRational::from_integer((1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k)))
}

fn rational_pow(x: &BigRational, n: usize) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, _| acc * x)
}

fn sign(n: usize) -> BigRational {
    if n % 2 == 0 {
        BigRational::one()
    } else {
        -BigRational::one()
    }
}

/// Coefficient polynomial of `δ⁽ᵏ⁾(t)` in the expansion of `ℛf` for a
/// point input, `(−1)ᵏ/k! · p^k(ω)`, from the exact moments
/// `μ^β = Σ w b_α (−1)^{|α|} β!/(β−α)! a^{β−α}`.
pub fn point_expansion_exact(f: &DeltaCombo, k: usize) -> Result<RationalPoly> {
    let mut out = RationalPoly::zero(f.dim, k);
    for beta in multi_indices(f.dim, k) {
        let mut mu = BigRational::zero();
        for t in &f.terms {
            let w = exact_real(t.weight)?;
            let a: Vec<BigRational> = t.point.iter().map(|&x| exact_rational(x)).collect::<Result<_>>()?;
            for (alpha, b) in &t.operator.terms {
                if alpha.iter().zip(&beta).any(|(x, y)| x > y) {
                    continue;
                }
                let mut v = sign(degree(alpha)) * &w * exact_real(*b)?;
                for ((&ai, &bi), x) in alpha.iter().zip(&beta).zip(&a) {
                    v = v * rational_factorial(bi) / rational_factorial(bi - ai) * rational_pow(x, bi - ai);
                }
                mu += v;
            }
        }
        // (−1)ᵏ/k! · k!/β! · μ^β
        let beta_fact = beta
            .iter()
            .fold(BigRational::one(), |acc, &b| acc * rational_factorial(b));
        out.add(beta, sign(k) * mu / beta_fact);
    }
    Ok(out)
}

/// Which normalization of the point-input expansion formula to expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DisplayForm {
    /// `Σ_{|α|≤k} (−1)^{k−|α|}/|α|! · (b_α ω^α)(aω)^{k−|α|}` as printed.
    Literal,
    /// The same sum with `1/(k−|α|)!`, which is what the Taylor expansion of
    /// `J(ωD_t)δ(t − aω)` produces.
    Corrected,
}

/// The closed-form coefficient of `δ⁽ᵏ⁾(t)` for `Σ w J(D)δ(x − a)`,
/// expanded into monomials in `ω` with exact rational arithmetic.
pub fn point_expansion_display(f: &DeltaCombo, k: usize, form: DisplayForm) -> Result<RationalPoly> {
    let mut out = RationalPoly::zero(f.dim, k);
    for t in &f.terms {
        let w = exact_real(t.weight)?;
        let a: Vec<BigRational> = t.point.iter().map(|&x| exact_rational(x)).collect::<Result<_>>()?;
        for (alpha, b) in &t.operator.terms {
            let m = degree(alpha);
            if m > k {
                continue;
            }
            let j = k - m;
            let denom = match form {
                DisplayForm::Literal => rational_factorial(m),
                DisplayForm::Corrected => rational_factorial(j),
            };
            let lead = &w * exact_real(*b)? * sign(j) / denom;
            // (aω)ʲ = Σ_{|γ|=j} j!/γ! a^γ ω^γ
            for gamma in multi_indices(f.dim, j) {
                let mut c = lead.clone() * rational_factorial(j);
                for (&g, x) in gamma.iter().zip(&a) {
                    c = c * rational_pow(x, g) / rational_factorial(g);
                }
                let idx: MultiIndex = alpha.iter().zip(&gamma).map(|(p, q)| p + q).collect();
                out.add(idx, c);
            }
        }
    }
    Ok(out)
}

/// Largest `|c|` in a rational polynomial, as a float (for reports).
pub fn rational_max_abs(p: &RationalPoly) -> f64 {
    use num_traits::ToPrimitive;
    p.coeffs
        .values()
        .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max)
}
