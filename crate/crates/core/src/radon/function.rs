use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::expr::{Expr, GrowthClass};
use crate::quad::verify_growth;
use crate::{Error, Result};

/// Largest supported dimension of `ℝⁿ`.
pub const MAX_DIMENSION: usize = 3;

/// Radii at which a smooth input is checked along each sample ray.
pub const RAY_SAMPLE_RADII: [f64; 3] = [5.0, 10.0, 20.0];

/// Farthest radius searched when truncating a smooth input.
pub const MAX_TRUNCATION_RADIUS: f64 = 40.0;

pub type MultiIndex = Vec<usize>;

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn multi_factorial(alpha: &[usize]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

pub(crate) fn degree(alpha: &[usize]) -> usize {
    alpha.iter().sum()
}

/// `x^α`.
pub fn monomial(alpha: &[usize], x: &[f64]) -> f64 {
    alpha.iter().zip(x).map(|(&a, &v)| v.powi(a as i32)).product()
}

/// Multi-indices of length `dim` and total degree `k`, lexicographically
/// decreasing (`x₁ᵏ` first).
pub fn multi_indices(dim: usize, k: usize) -> Vec<MultiIndex> {
    fn rec(pos: usize, remaining: usize, cur: &mut MultiIndex, out: &mut Vec<MultiIndex>) {
        if pos + 1 == cur.len() {
            cur[pos] = remaining;
            out.push(cur.clone());
            return;
        }
        for a in (0..=remaining).rev() {
            cur[pos] = a;
            rec(pos + 1, remaining - a, cur, out);
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        return out;
    }
    rec(0, k, &mut vec![0; dim], &mut out);
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Rejects directions of the wrong length or off the unit sphere.
pub fn check_direction(omega: &[f64], dim: usize) -> Result<()> {
    if omega.len() != dim {
        return Err(Error::InvalidArgument(format!(
            "direction has {} components, the input lives in dimension {dim}",
            omega.len()
        )));
    }
    let r = norm(omega);
    if !r.is_finite() || (r - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("direction {omega:?} is not a unit vector (|ω| = {r})")));
    }
    Ok(())
}

/// Orthonormal basis of the hyperplane `ω^⊥`, by Gram-Schmidt on the
/// coordinate vectors other than the one closest to `ω`.
pub fn complement_basis(omega: &[f64]) -> Vec<Vec<f64>> {
    let n = omega.len();
    let skip = (0..n)
        .max_by(|&i, &j| omega[i].abs().total_cmp(&omega[j].abs()))
        .unwrap_or(0);
    let mut basis: Vec<Vec<f64>> = vec![omega.to_vec()];
    for i in (0..n).filter(|&i| i != skip) {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for b in &basis {
            let p = dot(&v, b);
            for (vj, bj) in v.iter_mut().zip(b) {
                *vj -= p * bj;
            }
        }
        let r = norm(&v);
        basis.push(v.into_iter().map(|x| x / r).collect());
    }
    basis.remove(0);
    basis
}

/// Reproducible, evenly spread unit vectors in `ℝⁿ`.
///
/// The circle gets equally spaced angles; the 2-sphere a Fibonacci lattice.
/// The seed only fixes a common rotation offset.
pub fn sphere_directions(dim: usize, count: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if dim == 0 || dim > MAX_DIMENSION {
        return Err(Error::InvalidArgument(format!("dimension {dim} is outside 1..={MAX_DIMENSION}")));
    }
    let offset: f64 = ChaCha8Rng::seed_from_u64(seed).gen();
    let dirs = match dim {
        1 => (0..count).map(|j| vec![if j % 2 == 0 { 1.0 } else { -1.0 }]).collect(),
        2 => (0..count)
            .map(|j| {
                let t = 2.0 * PI * (j as f64 + offset) / count as f64;
                vec![t.cos(), t.sin()]
            })
            .collect(),
        _ => {
            let golden = (1.0 + 5f64.sqrt()) / 2.0;
            (0..count)
                .map(|j| {
                    let z = 1.0 - (2.0 * j as f64 + 1.0) / count as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = 2.0 * PI * (j as f64 / golden + offset);
                    let v = [r * phi.cos(), r * phi.sin(), z];
                    let s = norm(&v);
                    v.iter().map(|x| x / s).collect()
                })
                .collect()
        }
    };
    Ok(dirs)
}

/// `J(D) = Σ b_α ∂^α` with finitely many terms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiIndexOperator {
    pub dim: usize,
    pub terms: Vec<(MultiIndex, Complex64)>,
}

impl MultiIndexOperator {
    pub fn new(dim: usize, terms: Vec<(MultiIndex, Complex64)>) -> Result<Self> {
        for (i, (alpha, _)) in terms.iter().enumerate() {
            if alpha.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "multi-index {alpha:?} does not have {dim} components"
                )));
            }
            if terms[..i].iter().any(|(b, _)| b == alpha) {
                return Err(Error::InvalidArgument(format!("multi-index {alpha:?} appears twice")));
            }
        }
        Ok(MultiIndexOperator { dim, terms })
    }

    pub fn identity(dim: usize) -> Self {
        MultiIndexOperator {
            dim,
            terms: vec![(vec![0; dim], Complex64::new(1.0, 0.0))],
        }
    }

    /// `∂^α`.
    pub fn partial(alpha: MultiIndex) -> Self {
        MultiIndexOperator {
            dim: alpha.len(),
            terms: vec![(alpha, Complex64::new(1.0, 0.0))],
        }
    }

    pub fn order(&self) -> usize {
        self.terms.iter().map(|(a, _)| degree(a)).max().unwrap_or(0)
    }
}

/// `weight · J(D)δ(x − point)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaTerm {
    pub operator: MultiIndexOperator,
    pub point: Vec<f64>,
    pub weight: Complex64,
}

/// A finite combination of derivatives of point masses in `ℝⁿ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaCombo {
    pub label: String,
    pub dim: usize,
    pub terms: Vec<DeltaTerm>,
}

impl DeltaCombo {
    pub fn new(label: impl Into<String>, dim: usize, terms: Vec<DeltaTerm>) -> Result<Self> {
        if dim == 0 || dim > MAX_DIMENSION {
            return Err(Error::InvalidArgument(format!("dimension {dim} is outside 1..={MAX_DIMENSION}")));
        }
        for t in &terms {
            if t.operator.dim != dim || t.point.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "delta term at {:?} does not live in dimension {dim}",
                    t.point
                )));
            }
            if t.point.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidArgument(format!("delta point {:?} is not finite", t.point)));
            }
        }
        Ok(DeltaCombo {
            label: label.into(),
            dim,
            terms,
        })
    }

    /// `δ(x − a)`.
    pub fn delta(label: impl Into<String>, point: Vec<f64>) -> Result<Self> {
        let dim = point.len();
        DeltaCombo::new(
            label,
            dim,
            vec![DeltaTerm {
                operator: MultiIndexOperator::identity(dim),
                point,
                weight: Complex64::new(1.0, 0.0),
            }],
        )
    }

    /// Radius of the smallest centred ball containing the support.
    pub fn support_radius(&self) -> f64 {
        self.terms.iter().map(|t| norm(&t.point)).fold(0.0, f64::max)
    }

    /// `μ^β = ∫ x^β f dx = Σ w Σ_α b_α (−1)^{|α|} β!/(β−α)! a^{β−α}`.
    pub fn multi_moment(&self, beta: &[usize]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            for (alpha, b) in &t.operator.terms {
                if alpha.iter().zip(beta).any(|(a, b)| a > b) {
                    continue;
                }
                let mut v = if degree(alpha) % 2 == 0 { 1.0 } else { -1.0 };
                for ((&a, &bb), &x) in alpha.iter().zip(beta).zip(&t.point) {
                    v *= falling(bb, a) * x.powi((bb - a) as i32);
                }
                acc += t.weight * b * v;
            }
        }
        acc
    }

    /// `t`-moment `μᵏ` of the slice in direction `ω`, in closed form.
    pub fn slice_moment(&self, omega: &[f64], k: usize) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let c = dot(&t.point, omega);
            for (alpha, b) in &t.operator.terms {
                let m = degree(alpha);
                if m > k {
                    continue;
                }
                // μᵏ(δ⁽ᵐ⁾(t − c)) = (−1)ᵐ k!/(k−m)! c^{k−m}
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let v = sign * falling(k, m) * c.powi((k - m) as i32) * monomial(alpha, omega);
                acc += t.weight * b * v;
            }
        }
        acc
    }

    /// A bound `|μᵏ(ℛf(ω,·))| ≤ M·Rᵏ` valid for every `k` and `ω`.
    ///
    /// `R` exceeds the support radius by 10% (at least 1e−3) so the
    /// polynomial factor `k!/(k−m)!` of derivative terms is absorbed into `M`.
    pub fn moment_bound(&self) -> (f64, f64) {
        let radius = self.support_radius();
        let r = (1.1 * radius).max(radius + 1e-3);
        let mut m_total = 0.0;
        for t in &self.terms {
            let c = norm(&t.point);
            for (alpha, b) in &t.operator.terms {
                let m = degree(alpha);
                let mut sup: f64 = 0.0;
                for k in m..=4000 {
                    let v = falling(k, m) * (c / r).powi((k - m) as i32) / r.powi(m as i32);
                    sup = sup.max(v);
                    if k > 4 * m + 50 && v < 1e-3 * sup {
                        break;
                    }
                }
                m_total += t.weight.norm() * b.norm() * sup;
            }
        }
        (m_total * (1.0 + 1e-9), r)
    }
}

/// `n!/(n−m)!`.
pub(crate) fn falling(n: usize, m: usize) -> f64 {
    ((n - m + 1)..=n).map(|k| k as f64).product()
}

/// A rapidly decreasing real-analytic function on `ℝⁿ`, given by an
/// expression in `x1..xn`.
#[derive(Clone, Debug)]
pub struct SmoothRapid {
    pub label: String,
    pub dim: usize,
    pub expr: Expr,
    pub growth: GrowthClass,
    pub constant: f64,
}

impl SmoothRapid {
    /// Checks the declared class along the coordinate axes and diagonals.
    pub fn new(label: impl Into<String>, dim: usize, expr: Expr, growth: GrowthClass, constant: f64) -> Result<Self> {
        let label = label.into();
        if dim == 0 || dim > MAX_DIMENSION {
            return Err(Error::InvalidArgument(format!("dimension {dim} is outside 1..={MAX_DIMENSION}")));
        }
        if expr.arity() > dim {
            return Err(Error::InvalidArgument(format!(
                "`{label}` uses coordinate {} in dimension {dim}",
                expr.arity()
            )));
        }
        if !growth.is_asymptotic() {
            return Err(Error::Growth(format!(
                "`{label}` must be asymptotic or exponentially decaying, declared {growth}"
            )));
        }
        for d in ray_directions(dim) {
            let ray = restrict_to_ray(&expr, &d);
            let report = verify_growth(&ray, growth, &RAY_SAMPLE_RADII);
            if !report.pass {
                return Err(Error::Growth(format!(
                    "`{label}` exceeds the {growth} envelope along {d:?} at r = {}",
                    report.first_violation.unwrap_or(f64::NAN)
                )));
            }
        }
        Ok(SmoothRapid {
            label,
            dim,
            expr,
            growth,
            constant,
        })
    }

    pub fn parse(label: impl Into<String>, dim: usize, text: &str, growth: GrowthClass, constant: f64) -> Result<Self> {
        SmoothRapid::new(label, dim, crate::expr::parse_expr(text)?, growth, constant)
    }

    pub fn eval(&self, x: &[f64]) -> Result<Complex64> {
        Ok(self.expr.eval_real(x)?)
    }

    /// Smallest radius `L` (a multiple of 1/2) beyond which the sampled
    /// `|f|·r^{n−1}` stays below `tol/1000` out to the search limit. The
    /// samples are the axis and diagonal rays at steps of 1/4.
    pub fn truncation_radius(&self, tol: f64) -> Result<f64> {
        let dirs = ray_directions(self.dim);
        let steps = (MAX_TRUNCATION_RADIUS * 4.0) as usize;
        let mut last_big = 0.0;
        for j in 1..=steps {
            let r = j as f64 / 4.0;
            let mut worst: f64 = 0.0;
            for d in &dirs {
                let x: Vec<f64> = d.iter().map(|v| v * r).collect();
                worst = worst.max(self.eval(&x)?.norm());
            }
            if worst * r.powi(self.dim as i32 - 1) > 1e-3 * tol {
                last_big = r;
            }
        }
        if last_big >= MAX_TRUNCATION_RADIUS {
            return Err(Error::Growth(format!(
                "`{}` is not negligible within radius {MAX_TRUNCATION_RADIUS}",
                self.label
            )));
        }
        Ok(((last_big + 0.25) * 2.0).ceil() / 2.0)
    }
}

/// Coordinate axes and diagonals, both orientations, normalized.
pub(crate) fn ray_directions(dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let total = 3usize.pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let v: Vec<f64> = (0..dim)
            .map(|_| {
                let s = (c % 3) as f64 - 1.0;
                c /= 3;
                s
            })
            .collect();
        let r = norm(&v);
        if r > 0.0 {
            out.push(v.into_iter().map(|x| x / r).collect());
        }
    }
    out
}

/// `f(z·d)` as an expression in `z`.
fn restrict_to_ray(e: &Expr, d: &[f64]) -> Expr {
    // coordinate 0 first: `z` and `x1` share it, and later substitutions
    // introduce fresh `z`s that must stay untouched
    let mut out = e.clone();
    for (i, &di) in d.iter().enumerate() {
        out = out.substitute(i, &Expr::mul(Expr::real(di), Expr::z()));
    }
    out
}

/// Inputs of the Radon transform.
#[derive(Clone, Debug)]
pub enum MultiDimFunction {
    SmoothRapid(SmoothRapid),
    DeltaCombo(DeltaCombo),
}

impl MultiDimFunction {
    pub fn label(&self) -> &str {
        match self {
            MultiDimFunction::SmoothRapid(f) => &f.label,
            MultiDimFunction::DeltaCombo(f) => &f.label,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MultiDimFunction::SmoothRapid(f) => f.dim,
            MultiDimFunction::DeltaCombo(f) => f.dim,
        }
    }
}

impl From<SmoothRapid> for MultiDimFunction {
    fn from(f: SmoothRapid) -> Self {
        MultiDimFunction::SmoothRapid(f)
    }
}

impl From<DeltaCombo> for MultiDimFunction {
    fn from(f: DeltaCombo) -> Self {
        MultiDimFunction::DeltaCombo(f)
    }
}

/// The built-in multidimensional corpus.
pub fn builtin_radon_corpus() -> Vec<MultiDimFunction> {
    let decay = GrowthClass::ExponentialDecay(1.0);
    let smooth = |label: &str, dim: usize, text: &str, constant: f64| -> MultiDimFunction {
        SmoothRapid::parse(label, dim, text, decay, constant)
            .expect("built-in corpus entry is valid")
            .into()
    };
    let one = Complex64::new(1.0, 0.0);
    let dx_combo = DeltaCombo::new(
        "dx_delta",
        2,
        vec![
            DeltaTerm {
                operator: MultiIndexOperator::partial(vec![1, 0]),
                point: vec![0.5, 0.5],
                weight: one,
            },
            DeltaTerm {
                operator: MultiIndexOperator::identity(2),
                point: vec![0.0, 0.0],
                weight: Complex64::new(0.5, 0.0),
            },
        ],
    )
    .expect("built-in corpus entry is valid");
    vec![
        smooth("gauss2", 2, "exp(-(x1^2 + x2^2))", 2.0),
        smooth("gauss2_shifted", 2, "exp(-((x1 - 0.5)^2 + 2*x2^2))", 4.0),
        smooth("odd2", 2, "x1*exp(-(x1^2 + x2^2))", 2.0),
        smooth("gauss3", 3, "exp(-(x1^2 + x2^2 + x3^2))", 2.0),
        DeltaCombo::delta("delta_a", vec![1.0, 0.0])
            .expect("built-in corpus entry is valid")
            .into(),
        dx_combo.into(),
    ]
}
