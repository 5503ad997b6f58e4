use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::expr::{differentiate, Expr};
use crate::{Error, Result};

/// Evaluator for a defining function known only numerically.
pub type NumericFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// A holomorphic defining function on one side of the real axis.
#[derive(Clone)]
pub enum DefiningFunction {
    Expr(Expr),
    /// Quadrature-backed or otherwise opaque; not differentiable symbolically.
    Numeric { label: String, f: NumericFn },
    /// `Σ c_k F_k`.
    Sum(Vec<(Complex64, DefiningFunction)>),
}

impl fmt::Debug for DefiningFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DefiningFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DefiningFunction::Expr(e) => write!(f, "{e}"),
            DefiningFunction::Numeric { label, .. } => write!(f, "<{label}>"),
            DefiningFunction::Sum(terms) => {
                for (i, (c, t)) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "({c})*[{t}]")?;
                }
                Ok(())
            }
        }
    }
}

impl From<Expr> for DefiningFunction {
    fn from(e: Expr) -> Self {
        DefiningFunction::Expr(e)
    }
}

impl DefiningFunction {
    pub fn zero() -> Self {
        DefiningFunction::Expr(Expr::zero())
    }

    pub fn numeric<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        DefiningFunction::Numeric {
            label: label.into(),
            f: Arc::new(f),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            DefiningFunction::Expr(e) => e.is_zero(),
            DefiningFunction::Numeric { .. } => false,
            DefiningFunction::Sum(t) => t.iter().all(|(c, f)| c.norm() == 0.0 || f.is_zero()),
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            DefiningFunction::Expr(e) => Ok(e.eval_z(z)?),
            DefiningFunction::Numeric { f, .. } => f(z),
            DefiningFunction::Sum(terms) => {
                let mut s = Complex64::new(0.0, 0.0);
                for (c, t) in terms {
                    if c.norm() != 0.0 {
                        s += c * t.eval(z)?;
                    }
                }
                Ok(s)
            }
        }
    }

    /// Symbolic form, when every part is symbolic.
    pub fn as_expr(&self) -> Option<Expr> {
        match self {
            DefiningFunction::Expr(e) => Some(e.clone()),
            DefiningFunction::Numeric { .. } => None,
            DefiningFunction::Sum(terms) => {
                let mut acc = Expr::zero();
                for (c, t) in terms {
                    acc = Expr::add(acc, Expr::mul(Expr::Const(*c), t.as_expr()?));
                }
                Some(acc)
            }
        }
    }

    pub fn is_symbolic(&self) -> bool {
        self.as_expr().is_some()
    }

    pub fn derivative(&self, order: usize) -> Result<DefiningFunction> {
        let e = self
            .as_expr()
            .ok_or_else(|| Error::NotSymbolic(format!("cannot differentiate {self}")))?;
        Ok(DefiningFunction::Expr(differentiate(&e, order, 0)))
    }

    /// `Σ c_k F_k`, kept symbolic when possible.
    pub fn combine(terms: Vec<(Complex64, DefiningFunction)>) -> DefiningFunction {
        let terms: Vec<_> = terms
            .into_iter()
            .filter(|(c, f)| c.norm() != 0.0 && !f.is_zero())
            .collect();
        if terms.is_empty() {
            return DefiningFunction::zero();
        }
        let sum = DefiningFunction::Sum(terms);
        match sum.as_expr() {
            Some(e) => DefiningFunction::Expr(e),
            None => sum,
        }
    }

    pub fn scale(&self, c: Complex64) -> DefiningFunction {
        DefiningFunction::combine(vec![(c, self.clone())])
    }
}
