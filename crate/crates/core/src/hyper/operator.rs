use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::defining::DefiningFunction;
use super::object::{Hyperfunction1D, TestFunction};
use crate::expr::{differentiate, Expr, GrowthClass};
use crate::{Error, Result};

/// `b_n` for indices beyond the stored prefix.
pub type CoefficientGenerator = Arc<dyn Fn(usize) -> Complex64 + Send + Sync>;

/// Number of root-test terms examined for operators with a generator tail.
pub const ROOT_TEST_TERMS: usize = 60;

/// `J(D) = Σ b_n (d/dx)ⁿ` with symbol `J(ζ) = Σ b_n (iζ)ⁿ`.
#[derive(Clone)]
pub struct LocalOperator {
    pub label: String,
    pub coefficients: Vec<Complex64>,
    pub generator: Option<CoefficientGenerator>,
}

impl fmt::Debug for LocalOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalOperator")
            .field("label", &self.label)
            .field("coefficients", &self.coefficients)
            .field("infinite", &self.generator.is_some())
            .finish()
    }
}

impl LocalOperator {
    pub fn finite(label: impl Into<String>, coefficients: Vec<Complex64>) -> Self {
        let mut coefficients = coefficients;
        while coefficients.last().is_some_and(|c| c.norm() == 0.0) {
            coefficients.pop();
        }
        LocalOperator {
            label: label.into(),
            coefficients,
            generator: None,
        }
    }

    pub fn from_real(label: impl Into<String>, coefficients: &[f64]) -> Self {
        LocalOperator::finite(label, coefficients.iter().map(|&b| Complex64::new(b, 0.0)).collect())
    }

    /// `(d/dx)ⁿ`.
    pub fn derivative(n: usize) -> Self {
        let mut b = vec![Complex64::new(0.0, 0.0); n + 1];
        b[n] = Complex64::new(1.0, 0.0);
        LocalOperator::finite(format!("D^{n}"), b)
    }

    pub fn identity() -> Self {
        LocalOperator::derivative(0).with_label("1")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Stored prefix followed by `generator(n)` for `n >= prefix.len()`.
    pub fn infinite<F>(label: impl Into<String>, prefix: Vec<Complex64>, generator: F) -> Self
    where
        F: Fn(usize) -> Complex64 + Send + Sync + 'static,
    {
        LocalOperator {
            label: label.into(),
            coefficients: prefix,
            generator: Some(Arc::new(generator)),
        }
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        match self.coefficients.get(n) {
            Some(b) => *b,
            None => match &self.generator {
                Some(g) => g(n),
                None => Complex64::new(0.0, 0.0),
            },
        }
    }

    /// Order of a finite operator; `None` for infinite order.
    pub fn order(&self) -> Option<usize> {
        match self.generator {
            Some(_) => None,
            None => Some(self.coefficients.len().saturating_sub(1)),
        }
    }

    /// `J(ζ) = Σ b_n (iζ)ⁿ`, summed until the terms are negligible for
    /// infinite-order operators.
    pub fn symbol(&self, zeta: Complex64) -> Complex64 {
        let iz = Complex64::new(0.0, 1.0) * zeta;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0);
        let limit = match self.order() {
            Some(n) => n + 1,
            None => 2000,
        };
        let mut quiet = 0;
        for n in 0..limit {
            let term = self.coefficient(n) * pow;
            sum += term;
            pow *= iz;
            if self.generator.is_some() && n > self.coefficients.len() {
                if term.norm() <= 1e-17 * sum.norm().max(1e-300) {
                    quiet += 1;
                    if quiet >= 8 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
            }
        }
        sum
    }

    /// `r_n = (|b_n| n!)^{1/n}` for `n = 1..=terms`.
    pub fn root_sequence(&self, terms: usize) -> Vec<f64> {
        let mut log_fact = 0.0;
        (1..=terms)
            .map(|n| {
                log_fact += (n as f64).ln();
                let b = self.coefficient(n).norm();
                if b == 0.0 {
                    0.0
                } else {
                    ((b.ln() + log_fact) / n as f64).exp()
                }
            })
            .collect()
    }

    /// Root test on the coefficients: finite operators always pass; an
    /// infinite tail must make `(|b_n| n!)^{1/n}` non-increasing over the
    /// second half of the examined range and strictly smaller at its end.
    pub fn check_admissible(&self) -> Result<()> {
        if self.generator.is_none() {
            return Ok(());
        }
        let m = ROOT_TEST_TERMS.max(self.coefficients.len());
        let r = self.root_sequence(m);
        let half = m / 2;
        let tail: Vec<f64> = r[half - 1..].iter().copied().filter(|v| *v > 0.0).collect();
        if tail.is_empty() {
            return Ok(());
        }
        let monotone = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        let first = tail[0];
        let last = *tail.last().expect("nonempty");
        if !monotone || last >= first {
            return Err(Error::Admissibility(format!(
                "`{}`: (|b_n| n!)^(1/n) goes from {first:.4} at n = {half} to {last:.4} at n = {m}, not decreasing to 0",
                self.label
            )));
        }
        Ok(())
    }

    /// Formal adjoint `Σ b_n (−d/dx)ⁿ`.
    pub fn adjoint(&self) -> LocalOperator {
        let flip = |n: usize, b: Complex64| if n % 2 == 1 { -b } else { b };
        let coefficients = self.coefficients.iter().enumerate().map(|(n, b)| flip(n, *b)).collect();
        let generator = self.generator.clone().map(|g| -> CoefficientGenerator {
            Arc::new(move |n| flip(n, g(n)))
        });
        LocalOperator {
            label: format!("{}*", self.label),
            coefficients,
            generator,
        }
    }

    /// `Σ b_n e⁽ⁿ⁾` for a finite operator.
    pub fn apply_expr(&self, e: &Expr) -> Result<Expr> {
        let order = self.order().ok_or_else(|| {
            Error::InvalidArgument(format!("`{}` has infinite order", self.label))
        })?;
        let mut acc = Expr::zero();
        let mut d = e.clone();
        for n in 0..=order {
            if n > 0 {
                d = differentiate(&d, 1, 0);
            }
            let b = self.coefficients[n];
            if b.norm() != 0.0 {
                acc = Expr::add(acc, Expr::mul(Expr::Const(b), d.clone()));
            }
        }
        Ok(acc)
    }

    /// `J(D)φ` for a finite operator; the envelope constant grows by the
    /// Cauchy estimate on a disc of half the strip width.
    pub fn apply_test(&self, phi: &TestFunction) -> Result<TestFunction> {
        let expr = self.apply_expr(&phi.expr)?;
        let rho = (0.5 * phi.strip).min(1.0);
        let constant = phi.constant * self.cauchy_factor(phi.growth, rho);
        Ok(TestFunction::new(
            format!("{}({})", self.label, phi.label),
            expr,
            phi.strip,
            phi.growth,
            constant,
        ))
    }

    /// `Σ |b_n| n!/ρⁿ` times the envelope shift over distance `ρ`.
    pub(crate) fn cauchy_factor(&self, growth: GrowthClass, rho: f64) -> f64 {
        let mut s = 0.0;
        let mut fact = 1.0;
        for (n, b) in self.coefficients.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            s += b.norm() * fact / rho.powi(n as i32);
        }
        let shift = match growth {
            GrowthClass::ExponentialDecay(d) => (d * rho).exp(),
            GrowthClass::Tempered(g) => (1.0 + rho).powf(g.abs()),
            GrowthClass::Asymptotic => (1.0 + rho).powi(2),
            GrowthClass::InfraExponential => (0.1 * rho).exp(),
        };
        s * shift
    }
}

/// `J(D)f`. Finite-order operators act on symbolic defining functions;
/// infinite-order operators require an asymptotic `f` and act as Fourier
/// multipliers.
pub fn apply_local_operator(j: &LocalOperator, f: &Hyperfunction1D) -> Result<Hyperfunction1D> {
    j.check_admissible()?;
    if j.order().is_none() {
        f.require_asymptotic()?;
        return crate::spectral::apply_multiplier(j, f);
    }
    let plus = f
        .f_plus
        .as_expr()
        .ok_or_else(|| Error::NotSymbolic(format!("F+ of `{}`", f.label)))?;
    let minus = f
        .f_minus
        .as_expr()
        .ok_or_else(|| Error::NotSymbolic(format!("F- of `{}`", f.label)))?;
    let rho = (0.5 * f.min_strip()).min(1.0);
    let mut out = f.clone();
    out.label = format!("{}({})", j.label, f.label);
    out.f_plus = DefiningFunction::Expr(j.apply_expr(&plus)?);
    out.f_minus = DefiningFunction::Expr(j.apply_expr(&minus)?);
    out.constant = f.constant * j.cauchy_factor(f.growth, rho);
    Ok(out)
}
