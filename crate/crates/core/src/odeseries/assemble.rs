use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::operator::{render_complex, to_complex64, ComplexRational, PolyCoeffOperator};
use super::solve::{admissibility, Admissibility};
use super::tail::{factorial, FormalLaurentTail, TailKind};
use crate::expr::{Expr, GrowthClass};
use crate::hyper::{pair, DefiningFunction, Hyperfunction1D, TestFunction};
use crate::quad::{integrate_interval, Adaptive, ContourSpec};
use crate::{Error, Result};

/// Strip width given to assembled defining functions; their only
/// singularity is at `τ = 0`.
pub const ASSEMBLED_STRIP: f64 = 4.0;

/// Terms needed before a coefficient pattern counts as recognised.
pub const MIN_PATTERN_TERMS: usize = 3;

#[derive(Clone, Debug)]
pub struct AssembledSolution {
    pub hyper: Hyperfunction1D,
    /// `F₊` in closed form when the tail matches `a·e^{−1/τ} + b`.
    pub closed_form: Option<String>,
    /// The root test failed; the defining function is only the truncation.
    pub formal_only: bool,
    pub admissibility: Admissibility,
}

/// `(a, b)` with `gₙ = a(−1)ⁿ/n!` for `n ≥ 1` and `g₀ = a + b`, i.e.
/// `Σ gₙ τ⁻ⁿ = a e^{−1/τ} + b`.
fn match_exponential(s: &FormalLaurentTail) -> Option<(ComplexRational, ComplexRational)> {
    if s.max_degree() < MIN_PATTERN_TERMS {
        return None;
    }
    let a = -s.coeffs[1].clone();
    if a.is_zero() {
        return None;
    }
    for n in 2..s.coeffs.len() {
        let f = BigRational::from_integer(factorial(n));
        let f = if n % 2 == 0 { f } else { -f };
        if s.coeffs[n] != &a / ComplexRational::new(f, BigRational::zero()) {
            return None;
        }
    }
    let b = match s.kind {
        TailKind::Delta => ComplexRational::zero(),
        TailKind::FinitePart => &s.coeffs[0] - &a,
    };
    Some((a, b))
}

fn exp_inverse() -> Expr {
    Expr::exp(Expr::mul(Expr::real(-1.0), Expr::powi(Expr::z(), -1)))
}

/// Builds the hyperfunction of a Laurent tail.
///
/// A tail matching `a e^{−1/τ} + b` is summed in closed form. Otherwise
/// the defining function is the truncated Laurent polynomial, flagged
/// formal when the root test fails. Delta type gives `F₊ = F₋ = G`
/// supported at the origin; finite-part type gives `F₊ = G`, `F₋ = −G`,
/// bounded on the real axis.
pub fn assemble(s: &FormalLaurentTail) -> AssembledSolution {
    let adm = admissibility(s);
    let kappa = s.kind.prefactor();
    let label = format!("{}-series", s.kind.name());
    let (g, closed_form, formal_only, bound) = if s.is_zero() {
        (Expr::zero(), Some("0".to_string()), false, 0.0)
    } else if let Some((a, b)) = match_exponential(s) {
        let ka = kappa * to_complex64(&a);
        let kb = kappa * to_complex64(&b);
        let e = Expr::add(Expr::mul(Expr::Const(ka), exp_inverse()), Expr::Const(kb));
        let text = match s.kind {
            TailKind::Delta => format!("F+ = F- = ({})/(2πi)·exp(-1/τ)", render_complex(&-a)),
            TailKind::FinitePart => {
                let half = ComplexRational::new(BigRational::new(1.into(), 2.into()), BigRational::zero());
                let (ha, hb) = (&a * &half, &b * &half);
                let tail = if hb.is_zero() {
                    String::new()
                } else {
                    format!(" + ({})", render_complex(&hb))
                };
                format!("F+ = -F- = ({})·exp(-1/τ){tail}", render_complex(&ha))
            }
        };
        // |e^{−1/x}| ≤ e for |x| ≥ 1
        (e, Some(text), false, 2.0 * (ka.norm() * std::f64::consts::E + kb.norm()))
    } else {
        let start = if s.kind == TailKind::Delta { 1 } else { 0 };
        let mut e = Expr::zero();
        let mut bound = 0.0;
        for n in start..s.coeffs.len() {
            if s.coeffs[n].is_zero() {
                continue;
            }
            let c = kappa * to_complex64(&s.coeffs[n]);
            bound += 2.0 * c.norm();
            e = Expr::add(e, Expr::mul(Expr::Const(c), Expr::powi(Expr::z(), -(n as i32))));
        }
        (e, None, !adm.pass, bound)
    };
    let hyper = match s.kind {
        TailKind::Delta => Hyperfunction1D::new(
            label,
            g.clone(),
            g,
            (ASSEMBLED_STRIP, ASSEMBLED_STRIP),
            GrowthClass::Asymptotic,
        )
        .with_constant(0.0)
        .with_support(0.0),
        TailKind::FinitePart => Hyperfunction1D::new(
            label,
            g.clone(),
            Expr::neg(g),
            (ASSEMBLED_STRIP, ASSEMBLED_STRIP),
            GrowthClass::Tempered(0.0),
        )
        .with_constant(bound.max(f64::MIN_POSITIVE)),
    };
    AssembledSolution {
        hyper,
        closed_form,
        formal_only,
        admissibility: adm,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub test: String,
    /// `⟨f, L*φ⟩`.
    pub value: Complex64,
    pub uncertainty: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub label: String,
    pub operator: String,
    pub rows: Vec<ResidualRow>,
    pub max_residual: f64,
}

/// `max_φ |⟨L f, φ⟩|` computed as `⟨f, L*φ⟩`.
pub fn residual_check(
    f: &Hyperfunction1D,
    l: &PolyCoeffOperator,
    suite: &[TestFunction],
    spec: &ContourSpec,
) -> Result<ResidualReport> {
    let mut rows = Vec::with_capacity(suite.len());
    for phi in suite {
        let adj = l.adjoint_test(phi)?;
        let r = pair(f, &adj, spec)?;
        rows.push(ResidualRow {
            test: phi.label.clone(),
            value: r.value,
            uncertainty: r.uncertainty(),
        });
    }
    let max_residual = rows.iter().map(|r| r.value.norm()).fold(0.0, f64::max);
    Ok(ResidualReport {
        label: f.label.clone(),
        operator: l.to_string(),
        rows,
        max_residual,
    })
}

/// Nodes of the trapezoid rule used for Taylor coefficients.
const TAYLOR_NODES: usize = 128;

/// Taylor coefficients `φ⁽ⁿ⁾(0)/n!`, `n ≤ max`, by the trapezoid rule on
/// the circle of radius `r`, and `max |φ|` there.
pub fn taylor_at_zero(phi: &TestFunction, max: usize, r: f64) -> Result<(Vec<Complex64>, f64)> {
    let mut values = Vec::with_capacity(TAYLOR_NODES);
    let mut sup: f64 = 0.0;
    for k in 0..TAYLOR_NODES {
        let theta = 2.0 * PI * k as f64 / TAYLOR_NODES as f64;
        let v = phi.eval(Complex64::from_polar(r, theta))?;
        sup = sup.max(v.norm());
        values.push(v);
    }
    let coeffs = (0..=max)
        .map(|n| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| v * Complex64::from_polar(1.0, -2.0 * PI * (n * k) as f64 / TAYLOR_NODES as f64))
                .sum();
            s / (TAYLOR_NODES as f64 * r.powi(n as i32))
        })
        .collect();
    Ok((coeffs, sup))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketCheck {
    pub test: String,
    /// `⟨assemble(s), φ⟩` on the contour.
    pub pairing: Complex64,
    pub pairing_uncertainty: f64,
    /// `Σ_{n≤N} cₙ (−1)ⁿ φ⁽ⁿ⁾(0)`.
    pub partial_sum: Complex64,
    /// Bound on the omitted terms from the last root value.
    pub tail_bound: f64,
    pub pass: bool,
}

/// Compares the contour pairing of an assembled delta-type tail with the
/// partial sums `Σ cₙ (−1)ⁿ φ⁽ⁿ⁾(0)`.
///
/// Past the prefix `|cₙ| n! ≤ ρᴺ` with `ρ` the last root value, and
/// `|φ⁽ⁿ⁾(0)| ≤ n! M/rⁿ` on the circle of radius `r`, so the omitted part is
/// at most `M q^{N+1}/(1 − q)` with `q = ρ/r`. A truncated (not closed-form)
/// assembly has no omitted part.
pub fn bracket_check(s: &FormalLaurentTail, phi: &TestFunction, spec: &ContourSpec) -> Result<BracketCheck> {
    if s.kind != TailKind::Delta {
        return Err(Error::InvalidArgument("the bracket identity applies to delta-type tails".into()));
    }
    let assembled = assemble(s);
    let r = (0.5 * phi.strip).min(1.0);
    let c = s.delta_series();
    let (taylor, sup) = taylor_at_zero(phi, c.len(), r)?;
    let mut partial = Complex64::new(0.0, 0.0);
    let mut fact = 1.0;
    for (n, cn) in c.iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        partial += to_complex64(cn) * sign * fact * taylor[n];
    }
    let tail_bound = if assembled.closed_form.is_some() && !s.is_zero() {
        let rho = assembled.admissibility.roots.last().copied().unwrap_or(f64::INFINITY);
        let q = rho / r;
        if q < 1.0 {
            sup * q.powi(c.len() as i32) / (1.0 - q)
        } else {
            f64::INFINITY
        }
    } else {
        0.0
    };
    let p = pair(&assembled.hyper, phi, spec)?;
    // rounding in the trapezoid sums and the partial sum
    let floor = 1e-12 * (1.0 + partial.norm());
    let pass = (p.value - partial).norm() <= tail_bound + p.uncertainty() + floor + spec.abs_tol;
    Ok(BracketCheck {
        test: phi.label.clone(),
        pairing: p.value,
        pairing_uncertainty: p.uncertainty(),
        partial_sum: partial,
        tail_bound,
        pass,
    })
}

/// Cut-off of the `u = 1/s` integral in [`classical_solution`].
const CLASSICAL_CUTOFF: f64 = 40.0;

/// `F(z) = (1/2πi)[∫₀^A (e^{−u} − 1)/(u(1 − zu)) du − Log(1/A − z)]`, the
/// Cauchy transform of `e^{−1/s}·1_{s>0}` up to `O(e^{−A})`.
fn classical_defining(z: Complex64) -> Result<Complex64> {
    let a = CLASSICAL_CUTOFF;
    // the integrand peaks like 1/|Im z| near u = 1/Re z
    let opts = Adaptive {
        abs_tol: 1e-13 / z.im.abs().min(1.0),
        max_subdivisions: 4000,
        max_panel: 2.0,
    };
    let j = integrate_interval(
        |u| {
            let head = (-u).exp_m1() / u;
            Ok(head / (Complex64::new(1.0, 0.0) - z * u))
        },
        0.0,
        a,
        opts,
    )?;
    let log = (Complex64::new(1.0 / a, 0.0) - z).ln();
    Ok((j.value - log) / Complex64::new(0.0, 2.0 * PI))
}

/// The classical solution `e^{−1/t}` for `t > 0`, continued by zero, through
/// the Cauchy transform of its values. The transform is computed with the
/// bounded integrand `e^{−1/s} − 1` plus the closed-form logarithm of the
/// Heaviside part, in the variable `u = 1/s`.
pub fn classical_solution() -> Hyperfunction1D {
    let f = DefiningFunction::numeric("cauchy[exp(-1/s)·1(s>0)]", classical_defining);
    Hyperfunction1D::new(
        "f3",
        f.clone(),
        f,
        (ASSEMBLED_STRIP, ASSEMBLED_STRIP),
        GrowthClass::Tempered(0.0),
    )
    .with_constant(1.0)
}

/// `e^{−1/x}` for `x > 0` and zero otherwise.
pub fn classical_value(x: f64) -> f64 {
    if x > 0.0 {
        (-1.0 / x).exp()
    } else {
        0.0
    }
}

/// `d₀ = 1` delta series and the compensated finite-part series with
/// constant `+1`, assembled; `L = t²d/dt − 1`.
pub fn example_solutions(order: usize) -> Result<(AssembledSolution, AssembledSolution)> {
    let l = PolyCoeffOperator::example();
    let one = ComplexRational::one();
    let d = super::solve::solve_series(&l, TailKind::Delta, one.clone(), order)?;
    let h = super::solve::solve_series(&l, TailKind::FinitePart, -one, order)?;
    let h = super::solve::compensate_constant(&l, &h)?;
    let mut f1 = assemble(&d.tail);
    f1.hyper.label = "f1".into();
    let mut f2 = assemble(&h);
    f2.hyper.label = "f2".into();
    Ok((f1, f2))
}
