use super::ast::{Builtin, Expr};

impl Expr {
    /// First derivative with respect to the coordinate with zero-based `index`.
    pub fn derivative(&self, index: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::zero(),
            Expr::Var(v) => {
                if v.index() == index {
                    Expr::one()
                } else {
                    Expr::zero()
                }
            }
            Expr::Add(a, b) => Expr::add(a.derivative(index), b.derivative(index)),
            Expr::Sub(a, b) => Expr::sub(a.derivative(index), b.derivative(index)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.derivative(index), (**b).clone()),
                Expr::mul((**a).clone(), b.derivative(index)),
            ),
            Expr::Div(a, b) => {
                let da = a.derivative(index);
                let db = b.derivative(index);
                if db.is_zero() {
                    return Expr::div(da, (**b).clone());
                }
                Expr::div(
                    Expr::sub(
                        Expr::mul(da, (**b).clone()),
                        Expr::mul((**a).clone(), db),
                    ),
                    Expr::powi((**b).clone(), 2),
                )
            }
            Expr::Neg(a) => Expr::neg(a.derivative(index)),
            Expr::Pow(a, n) => {
                let da = a.derivative(index);
                Expr::mul(
                    Expr::mul(Expr::real(f64::from(*n)), Expr::powi((**a).clone(), n - 1)),
                    da,
                )
            }
            Expr::Call(f, a) => {
                let da = a.derivative(index);
                if da.is_zero() {
                    return Expr::zero();
                }
                let u = (**a).clone();
                let outer = match f {
                    Builtin::Exp => self.clone(),
                    Builtin::Sech => Expr::neg(Expr::mul(self.clone(), Expr::tanh(u))),
                    Builtin::Tanh => Expr::powi(Expr::sech(u), 2),
                    Builtin::Gaussian => Expr::mul(Expr::real(-2.0), Expr::mul(u, self.clone())),
                };
                Expr::mul(outer, da)
            }
        }
    }
}

/// `order`-th derivative with respect to coordinate `index` (zero-based; `z`
/// is coordinate 0). Order 0 returns the expression unchanged.
pub fn differentiate(e: &Expr, order: usize, index: usize) -> Expr {
    let mut d = e.clone();
    for _ in 0..order {
        d = d.derivative(index);
    }
    d
}
