use num_complex::Complex64;
use thiserror::Error;

use super::ast::{Builtin, Expr};

/// Denominator magnitude below which evaluation reports a pole.
pub const DEFAULT_POLE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum EvalError {
    #[error("pole hit: denominator magnitude {magnitude:e} at {at}")]
    PoleHit { magnitude: f64, at: String },
    #[error("coordinate x{index} is not supplied by a {supplied}-dimensional point")]
    MissingCoordinate { index: usize, supplied: usize },
}

fn pole(magnitude: f64, point: &[Complex64]) -> EvalError {
    EvalError::PoleHit {
        magnitude,
        at: format!("{point:?}"),
    }
}

// sech and tanh through e^{-2u} on the right half-plane so that large |Re u|
// underflows instead of overflowing.
fn sech(u: Complex64, eps: f64) -> Result<Complex64, f64> {
    let u = if u.re < 0.0 { -u } else { u };
    let e = (-u).exp();
    let den = 1.0 + e * e;
    if den.norm() < eps {
        return Err(den.norm());
    }
    Ok(2.0 * e / den)
}

fn tanh(u: Complex64, eps: f64) -> Result<Complex64, f64> {
    let (u, sign) = if u.re < 0.0 { (-u, -1.0) } else { (u, 1.0) };
    let e2 = (-2.0 * u).exp();
    let den = 1.0 + e2;
    if den.norm() < eps {
        return Err(den.norm());
    }
    Ok(sign * (1.0 - e2) / den)
}

pub(crate) fn apply_builtin(f: Builtin, u: Complex64, eps: f64) -> Result<Complex64, f64> {
    match f {
        Builtin::Exp => Ok(u.exp()),
        Builtin::Sech => sech(u, eps),
        Builtin::Tanh => tanh(u, eps),
        Builtin::Gaussian => Ok((-u * u).exp()),
    }
}

impl Expr {
    /// Evaluates at `point` (coordinate `k` of the point feeds `x{k+1}`; `z` is
    /// coordinate 0).
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64, EvalError> {
        self.eval_with(point, DEFAULT_POLE_EPS)
    }

    /// Single-variable shorthand.
    pub fn eval_z(&self, z: Complex64) -> Result<Complex64, EvalError> {
        self.eval_with(std::slice::from_ref(&z), DEFAULT_POLE_EPS)
    }

    /// Evaluates at a real point of ℝⁿ.
    pub fn eval_real(&self, x: &[f64]) -> Result<Complex64, EvalError> {
        let mut buf = [Complex64::new(0.0, 0.0); 9];
        let n = x.len().min(9);
        for (slot, &v) in buf.iter_mut().zip(x) {
            *slot = Complex64::new(v, 0.0);
        }
        self.eval_with(&buf[..n], DEFAULT_POLE_EPS)
    }

    pub fn eval_with(&self, point: &[Complex64], eps: f64) -> Result<Complex64, EvalError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(v) => {
                let i = v.index();
                *point.get(i).ok_or(EvalError::MissingCoordinate {
                    index: i + 1,
                    supplied: point.len(),
                })?
            }
            Expr::Add(a, b) => a.eval_with(point, eps)? + b.eval_with(point, eps)?,
            Expr::Sub(a, b) => a.eval_with(point, eps)? - b.eval_with(point, eps)?,
            Expr::Mul(a, b) => a.eval_with(point, eps)? * b.eval_with(point, eps)?,
            Expr::Div(a, b) => {
                let num = a.eval_with(point, eps)?;
                let den = b.eval_with(point, eps)?;
                if den.norm() < eps {
                    return Err(pole(den.norm(), point));
                }
                num / den
            }
            Expr::Neg(a) => -a.eval_with(point, eps)?,
            Expr::Pow(a, n) => {
                let base = a.eval_with(point, eps)?;
                if *n < 0 && base.norm() < eps {
                    return Err(pole(base.norm(), point));
                }
                base.powi(*n)
            }
            Expr::Call(f, a) => {
                let u = a.eval_with(point, eps)?;
                apply_builtin(*f, u, eps).map_err(|m| pole(m, point))?
            }
        })
    }
}
