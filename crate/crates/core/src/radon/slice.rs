use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::function::{
    check_direction, complement_basis, degree, dot, falling, factorial, monomial, DeltaCombo,
    MultiDimFunction, SmoothRapid,
};
use crate::expr::{Expr, GrowthClass};
use crate::hyper::{pair, DefiningFunction, Hyperfunction1D, TestFunction};
use crate::quad::{integrate_box, kronrod_rule, ContourSpec};
use crate::spectral::{inverse_fourier, moment, InverseOptions, SmoothField, SpatialEnvelope};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Kronrod panel width of the `s`-grid carrying a projection.
pub const SLICE_PANEL: f64 = 0.1;

/// Strip declared for slice defining functions; they are holomorphic off a
/// real segment.
pub const SLICE_STRIP: f64 = 4.0;

/// `coefficient · δ⁽ᵒʳᵈᵉʳ⁾(t − center)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceDelta {
    pub order: usize,
    pub center: f64,
    pub coefficient: Complex64,
}

impl SliceDelta {
    /// `(−1/2πi)(−1)ᵐ m!/(z − c)^{m+1}` times the coefficient.
    fn defining_expr(&self) -> Expr {
        let m = self.order;
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        let k = self.coefficient * I * (sign * factorial(m) / (2.0 * PI));
        Expr::mul(
            Expr::Const(k),
            Expr::powi(Expr::sub(Expr::z(), Expr::real(self.center)), -(m as i32 + 1)),
        )
    }
}

/// How a slice was obtained.
#[derive(Clone, Debug)]
pub enum SliceForm {
    /// Projection `P(s)` sampled on a Kronrod grid over `[−radius, radius]`;
    /// `nodes` holds `(s, w·P(s))`.
    Projection {
        radius: f64,
        nodes: Arc<Vec<(f64, Complex64)>>,
    },
    /// Finite sum of shifted `δ` derivatives.
    Point(Vec<SliceDelta>),
}

/// `ℛf(ω, ·)` as a hyperfunction in `t` with `F₊ = F₋ = G(ω, ·)`.
#[derive(Clone, Debug)]
pub struct RadonSlice {
    pub direction: Vec<f64>,
    pub hyper: Hyperfunction1D,
    pub form: SliceForm,
}

impl RadonSlice {
    /// `G(ω, τ)` off the real axis.
    pub fn g(&self, tau: Complex64) -> Result<Complex64> {
        if tau.im == 0.0 {
            return Err(Error::InvalidArgument(format!("G is evaluated off the real axis, got {tau}")));
        }
        self.hyper.f_plus.eval(tau)
    }

    pub fn pair(&self, phi: &TestFunction, spec: &ContourSpec) -> Result<Complex64> {
        Ok(pair(&self.hyper, phi, spec)?.value)
    }

    pub fn moment(&self, k: usize, spec: &ContourSpec) -> Result<Complex64> {
        moment(&self.hyper, k, spec)
    }
}

/// Projection `P(s) = ∫_{ωx = s} f` at one `s`.
fn projection(f: &SmoothRapid, omega: &[f64], basis: &[Vec<f64>], radius: f64, s: f64, spec: &ContourSpec) -> Result<Complex64> {
    let n = f.dim;
    let point = |u: &[f64]| -> Vec<f64> {
        (0..n)
            .map(|i| s * omega[i] + u.iter().zip(basis).map(|(uj, e)| uj * e[i]).sum::<f64>())
            .collect()
    };
    if n == 1 {
        return f.eval(&point(&[]));
    }
    let bounds = vec![(-radius, radius); n - 1];
    Ok(integrate_box(|u| f.eval(&point(u)), &bounds, spec.abs_tol, spec.max_subdivisions)?.value)
}

fn kronrod_grid(radius: f64, panel: f64) -> Vec<(f64, f64)> {
    let panels = ((2.0 * radius / panel).round() as usize).max(1);
    let h = 2.0 * radius / panels as f64;
    (0..panels)
        .flat_map(|j| {
            let a = -radius + j as f64 * h;
            kronrod_rule(a, a + h)
        })
        .collect()
}

/// Merges terms with the same order and centre.
fn slice_deltas(f: &DeltaCombo, omega: &[f64]) -> Vec<SliceDelta> {
    let mut out: Vec<SliceDelta> = Vec::new();
    for t in &f.terms {
        let center = dot(&t.point, omega);
        for (alpha, b) in &t.operator.terms {
            let order = degree(alpha);
            let coefficient = t.weight * b * monomial(alpha, omega);
            match out
                .iter_mut()
                .find(|d| d.order == order && d.center.to_bits() == center.to_bits())
            {
                Some(d) => d.coefficient += coefficient,
                None => out.push(SliceDelta {
                    order,
                    center,
                    coefficient,
                }),
            }
        }
    }
    out.retain(|d| d.coefficient.norm() != 0.0);
    out.sort_by(|a, b| a.order.cmp(&b.order).then(a.center.total_cmp(&b.center)));
    out
}

/// `ℛf(ω, t) = G(ω, t + i0) − G(ω, t − i0)` with
/// `G(ω, τ) = (−1/2πi)∫ f(x)/(τ − ωx) dx`.
///
/// For smooth inputs the `x`-integral is split along `ω`: the projection
/// `P(s)` over each hyperplane `ωx = s` comes from box quadrature on the
/// truncated domain, and `G` is the Cauchy integral of `P` on a Kronrod
/// grid. The slice is then supported in `[−L, L]`, `L` the truncation
/// radius. Point inputs give `ℛf = J(ωD_t)δ(t − aω)` symbolically.
pub fn radon_transform(f: &MultiDimFunction, omega: &[f64], spec: &ContourSpec) -> Result<RadonSlice> {
    check_direction(omega, f.dim())?;
    match f {
        MultiDimFunction::SmoothRapid(g) => {
            let radius = g.truncation_radius(spec.abs_tol)?;
            let basis = complement_basis(omega);
            let grid = kronrod_grid(radius, SLICE_PANEL);
            let nodes = grid
                .par_iter()
                .map(|&(s, w)| Ok((s, w * projection(g, omega, &basis, radius, s, spec)?)))
                .collect::<Result<Vec<_>>>()?;
            let nodes = Arc::new(nodes);
            let held = nodes.clone();
            let label = format!("R[{}]({omega:?})", g.label);
            let big_g = DefiningFunction::numeric(format!("G[{}]", g.label), move |tau: Complex64| {
                let s: Complex64 = held.iter().map(|&(s, wp)| wp / (tau - s)).sum();
                Ok(s * I / (2.0 * PI))
            });
            let hyper = Hyperfunction1D::new(label, big_g.clone(), big_g, (SLICE_STRIP, SLICE_STRIP), GrowthClass::Asymptotic)
                .with_constant(0.0)
                .with_support(radius);
            Ok(RadonSlice {
                direction: omega.to_vec(),
                hyper,
                form: SliceForm::Projection { radius, nodes },
            })
        }
        MultiDimFunction::DeltaCombo(d) => {
            let deltas = slice_deltas(d, omega);
            let e = deltas
                .iter()
                .fold(Expr::zero(), |acc, t| Expr::add(acc, t.defining_expr()));
            let support = deltas.iter().map(|t| t.center.abs()).fold(0.0, f64::max);
            let hyper = Hyperfunction1D::new(
                format!("R[{}]({omega:?})", d.label),
                e.clone(),
                e,
                (SLICE_STRIP, SLICE_STRIP),
                GrowthClass::Asymptotic,
            )
            .with_constant(0.0)
            .with_support(support);
            Ok(RadonSlice {
                direction: omega.to_vec(),
                hyper,
                form: SliceForm::Point(deltas),
            })
        }
    }
}

/// `G(ω, τ)` straight from its defining integral over `ℝⁿ`, by box
/// quadrature for smooth inputs and in closed form for point inputs.
pub fn cauchy_value(f: &MultiDimFunction, omega: &[f64], tau: Complex64, spec: &ContourSpec) -> Result<Complex64> {
    if tau.im == 0.0 {
        return Err(Error::InvalidArgument(format!("G is evaluated off the real axis, got {tau}")));
    }
    if omega.len() != f.dim() {
        return Err(Error::InvalidArgument(format!(
            "direction has {} components, the input lives in dimension {}",
            omega.len(),
            f.dim()
        )));
    }
    let k = I / (2.0 * PI);
    match f {
        MultiDimFunction::SmoothRapid(g) => {
            let radius = g.truncation_radius(spec.abs_tol)?;
            let bounds = vec![(-radius, radius); g.dim];
            let q = integrate_box(
                |x| Ok(g.eval(x)? / (tau - dot(omega, x))),
                &bounds,
                spec.abs_tol,
                spec.max_subdivisions,
            )?;
            Ok(k * q.value)
        }
        MultiDimFunction::DeltaCombo(d) => {
            // ∂^α acting on 1/(τ − ωx) at x = a, with the sign of the adjoint
            let mut acc = Complex64::new(0.0, 0.0);
            for t in &d.terms {
                let c = dot(&t.point, omega);
                for (alpha, b) in &t.operator.terms {
                    let m = degree(alpha);
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    acc += t.weight * b * (sign * factorial(m) * monomial(alpha, omega))
                        / (tau - c).powu(m as u32 + 1);
                }
            }
            Ok(k * acc)
        }
    }
}

/// `|⟨ℛf(ω,·), φ⟩ − ⟨ℛf(−ω,·), φ(−·)⟩|`.
pub fn evenness_defect(f: &MultiDimFunction, omega: &[f64], phi: &TestFunction, spec: &ContourSpec) -> Result<f64> {
    let flipped: Vec<f64> = omega.iter().map(|x| -x).collect();
    let a = radon_transform(f, omega, spec)?.pair(phi, spec)?;
    let b = radon_transform(f, &flipped, spec)?.pair(&phi.dilate(-1.0)?, spec)?;
    Ok((a - b).norm())
}

/// Discretization of the Fourier route.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourierRouteOptions {
    /// Kronrod panel width along `ω`.
    pub s_panel: f64,
    /// Kronrod panel width across `ω`.
    pub u_panel: f64,
    pub inverse: InverseOptions,
}

impl Default for FourierRouteOptions {
    fn default() -> Self {
        FourierRouteOptions {
            s_panel: 0.5,
            u_panel: 1.0,
            inverse: InverseOptions {
                panel: 0.3,
                ..InverseOptions::default()
            },
        }
    }
}

/// A slice recovered as `(1/2π)∫ f̂(ρω)e^{iρt}dρ`.
#[derive(Clone, Debug)]
pub struct FourierSlice {
    pub direction: Vec<f64>,
    pub hyper: Hyperfunction1D,
    /// `(t, F₊(t) − F₋(t))` on the requested grid; meaningful where the
    /// slice is a function.
    pub samples: Vec<(f64, Complex64)>,
}

impl FourierSlice {
    pub fn pair(&self, phi: &TestFunction, spec: &ContourSpec) -> Result<Complex64> {
        Ok(pair(&self.hyper, phi, spec)?.value)
    }
}

/// `ρ ↦ f̂(ρω)` with its `ρ`-derivatives.
///
/// Smooth inputs use a fixed tensor Kronrod rule over the truncation box
/// in coordinates `(s, u)` adapted to `ω`; the phase `e^{−iρs}` depends on
/// `s` only, so the `u`-sums are done once. Point inputs use
/// `f̂(ξ) = Σ w b_α (iξ)^α e^{−iaξ}`.
pub fn ray_transform(f: &MultiDimFunction, omega: &[f64], opts: &FourierRouteOptions, spec: &ContourSpec) -> Result<SmoothField> {
    check_direction(omega, f.dim())?;
    match f {
        MultiDimFunction::SmoothRapid(g) => {
            let radius = g.truncation_radius(spec.abs_tol)?;
            let basis = complement_basis(omega);
            let s_grid = kronrod_grid(radius, opts.s_panel);
            let u_grid = kronrod_grid(radius, opts.u_panel);
            let n = g.dim;
            let mut cross: Vec<(Vec<f64>, f64)> = vec![(Vec::new(), 1.0)];
            for _ in 1..n {
                cross = cross
                    .into_iter()
                    .flat_map(|(u, w)| {
                        u_grid.iter().map(move |&(x, wx)| {
                            let mut v = u.clone();
                            v.push(x);
                            (v, w * wx)
                        })
                    })
                    .collect();
            }
            let weights = s_grid
                .par_iter()
                .map(|&(s, ws)| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    let mut x = vec![0.0; n];
                    for (u, wu) in &cross {
                        for (i, xi) in x.iter_mut().enumerate() {
                            *xi = s * omega[i] + u.iter().zip(&basis).map(|(uj, e)| uj * e[i]).sum::<f64>();
                        }
                        acc += wu * g.eval(&x)?;
                    }
                    Ok((s, ws * acc))
                })
                .collect::<Result<Vec<_>>>()?;
            let weights = Arc::new(weights);
            let field = SmoothField::from_fn(
                format!("F[{}]({omega:?})", g.label),
                GrowthClass::Asymptotic,
                crate::spectral::DEFAULT_DERIVATIVE_CAP,
                move |rho, k| {
                    Ok(weights
                        .iter()
                        .map(|&(s, q)| q * (-I * s).powu(k as u32) * (-I * rho * s).exp())
                        .sum())
                },
            );
            Ok(field.with_spatial(SpatialEnvelope {
                growth: GrowthClass::Asymptotic,
                constant: 0.0,
                support_radius: Some(radius),
            }))
        }
        MultiDimFunction::DeltaCombo(d) => {
            let deltas = slice_deltas(d, omega);
            let support = deltas.iter().map(|t| t.center.abs()).fold(0.0, f64::max);
            let field = SmoothField::from_fn(
                format!("F[{}]({omega:?})", d.label),
                GrowthClass::Tempered(deltas.iter().map(|t| t.order).max().unwrap_or(0) as f64),
                crate::spectral::DEFAULT_DERIVATIVE_CAP,
                move |rho, k| {
                    // d^k/dρ^k [(iρ)^m e^{−iρc}] by the Leibniz rule
                    let mut acc = Complex64::new(0.0, 0.0);
                    for t in &deltas {
                        let m = t.order;
                        let phase = (-I * rho * t.center).exp();
                        let mut sum = Complex64::new(0.0, 0.0);
                        let mut binom = 1.0;
                        for j in 0..=k.min(m) {
                            let poly = I.powu(m as u32) * falling(m, j) * rho.powi((m - j) as i32);
                            sum += binom * poly * (-I * t.center).powu((k - j) as u32);
                            binom = binom * (k - j) as f64 / (j + 1) as f64;
                        }
                        acc += t.coefficient * sum * phase;
                    }
                    Ok(acc)
                },
            );
            Ok(field.with_spatial(SpatialEnvelope {
                growth: GrowthClass::Asymptotic,
                constant: 0.0,
                support_radius: Some(support),
            }))
        }
    }
}

/// `ℛf(ω, t) = (1/2π)∫ f̂(ρω)e^{iρt}dρ`, sampled on `t_grid`.
pub fn radon_via_fourier(
    f: &MultiDimFunction,
    omega: &[f64],
    t_grid: &[f64],
    opts: &FourierRouteOptions,
    spec: &ContourSpec,
) -> Result<FourierSlice> {
    let field = ray_transform(f, omega, opts, spec)?;
    let mut hyper = inverse_fourier(&field, &opts.inverse, spec)?;
    hyper.label = format!("R~[{}]({omega:?})", f.label());
    let samples = t_grid
        .iter()
        .map(|&t| Ok((t, hyper.boundary_value(t, 0.0)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FourierSlice {
        direction: omega.to_vec(),
        hyper,
        samples,
    })
}

/// One comparison of the two Radon routes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoRouteDelta {
    pub label: String,
    pub direction: Vec<f64>,
    pub test: String,
    pub direct: Complex64,
    pub fourier: Complex64,
    /// `|direct − fourier| / (1 + |direct|)`.
    pub relative: f64,
}

/// Pairings of both routes against every test function.
pub fn two_route_check(
    f: &MultiDimFunction,
    omega: &[f64],
    suite: &[TestFunction],
    opts: &FourierRouteOptions,
    spec: &ContourSpec,
) -> Result<Vec<TwoRouteDelta>> {
    let direct = radon_transform(f, omega, spec)?;
    let fourier = radon_via_fourier(f, omega, &[], opts, spec)?;
    suite
        .iter()
        .map(|phi| {
            let a = direct.pair(phi, spec)?;
            let b = fourier.pair(phi, spec)?;
            Ok(TwoRouteDelta {
                label: f.label().to_string(),
                direction: omega.to_vec(),
                test: phi.label.clone(),
                direct: a,
                fourier: b,
                relative: (a - b).norm() / (1.0 + a.norm()),
            })
        })
        .collect()
}
