use std::fmt;

use num_complex::Complex64;

/// A variable: `z` or one of the coordinates `x1` .. `x9`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    Z,
    X(u8),
}

impl Var {
    /// Zero-based coordinate index in an evaluation point.
    pub fn index(self) -> usize {
        match self {
            Var::Z => 0,
            Var::X(k) => usize::from(k) - 1,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z => f.write_str("z"),
            Var::X(k) => write!(f, "x{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    Exp,
    Sech,
    Tanh,
    /// `gaussian(u) = exp(-u^2)`
    Gaussian,
}

impl Builtin {
    pub fn name(self) -> &'static str {
        match self {
            Builtin::Exp => "exp",
            Builtin::Sech => "sech",
            Builtin::Tanh => "tanh",
            Builtin::Gaussian => "gaussian",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "exp" => Some(Builtin::Exp),
            "sech" => Some(Builtin::Sech),
            "tanh" => Some(Builtin::Tanh),
            "gaussian" => Some(Builtin::Gaussian),
            _ => None,
        }
    }
}

/// Expression tree of an analytic function of one or more complex variables.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Complex64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(Builtin, Box<Expr>),
}

fn finite(c: Complex64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

impl Expr {
    pub fn constant(c: impl Into<Complex64>) -> Expr {
        Expr::Const(c.into())
    }

    pub fn real(x: f64) -> Expr {
        Expr::Const(Complex64::new(x, 0.0))
    }

    pub fn zero() -> Expr {
        Expr::real(0.0)
    }

    pub fn one() -> Expr {
        Expr::real(1.0)
    }

    pub fn z() -> Expr {
        Expr::Var(Var::Z)
    }

    /// Coordinate `x{k}`, one-based.
    pub fn x(k: u8) -> Expr {
        assert!((1..=9).contains(&k), "coordinate index out of range");
        Expr::Var(Var::X(k))
    }

    pub fn as_const(&self) -> Option<Complex64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == Complex64::new(0.0, 0.0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Expr::Const(c) if *c == Complex64::new(1.0, 0.0))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if finite(x + y) {
                return Expr::Const(x + y);
            }
        }
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        if b.is_zero() {
            return a;
        }
        if a.is_zero() {
            return Expr::neg(b);
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if finite(x - y) {
                return Expr::Const(x - y);
            }
        }
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_zero() || b.is_zero() {
            return Expr::zero();
        }
        if a.is_one() {
            return b;
        }
        if b.is_one() {
            return a;
        }
        match (a.as_const(), b.as_const()) {
            (Some(x), Some(y)) if finite(x * y) => return Expr::Const(x * y),
            // c1 * (c2 * e) -> (c1 c2) * e keeps repeated derivatives compact
            (Some(x), None) => {
                if let Expr::Mul(l, r) = &b {
                    if let Some(y) = l.as_const() {
                        if finite(x * y) {
                            return Expr::mul(Expr::Const(x * y), (**r).clone());
                        }
                    }
                }
            }
            (None, Some(_)) => return Expr::mul(b, a),
            _ => {}
        }
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        if a.is_zero() && !b.is_zero() {
            return Expr::zero();
        }
        if b.is_one() {
            return a;
        }
        if let (Some(x), Some(y)) = (a.as_const(), b.as_const()) {
            if y.norm() > 0.0 && finite(x / y) {
                return Expr::Const(x / y);
            }
        }
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn powi(a: Expr, n: i32) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return a;
        }
        if let Some(c) = a.as_const() {
            let v = c.powi(n);
            if c.norm() > 0.0 && finite(v) {
                return Expr::Const(v);
            }
        }
        Expr::Pow(Box::new(a), n)
    }

    pub fn call(f: Builtin, a: Expr) -> Expr {
        if let Some(c) = a.as_const() {
            if let Ok(v) = super::eval::apply_builtin(f, c, super::DEFAULT_POLE_EPS) {
                if finite(v) {
                    return Expr::Const(v);
                }
            }
        }
        Expr::Call(f, Box::new(a))
    }

    pub fn exp(a: Expr) -> Expr {
        Expr::call(Builtin::Exp, a)
    }

    pub fn sech(a: Expr) -> Expr {
        Expr::call(Builtin::Sech, a)
    }

    pub fn tanh(a: Expr) -> Expr {
        Expr::call(Builtin::Tanh, a)
    }

    pub fn gaussian(a: Expr) -> Expr {
        Expr::call(Builtin::Gaussian, a)
    }

    /// Scales by a constant factor.
    pub fn scale(self, c: impl Into<Complex64>) -> Expr {
        Expr::mul(Expr::Const(c.into()), self)
    }

    /// Replaces every occurrence of the coordinate `index` by `with`.
    pub fn substitute(&self, index: usize, with: &Expr) -> Expr {
        match self {
            Expr::Const(_) => self.clone(),
            Expr::Var(v) => {
                if v.index() == index {
                    with.clone()
                } else {
                    self.clone()
                }
            }
            Expr::Add(a, b) => Expr::add(a.substitute(index, with), b.substitute(index, with)),
            Expr::Sub(a, b) => Expr::sub(a.substitute(index, with), b.substitute(index, with)),
            Expr::Mul(a, b) => Expr::mul(a.substitute(index, with), b.substitute(index, with)),
            Expr::Div(a, b) => Expr::div(a.substitute(index, with), b.substitute(index, with)),
            Expr::Neg(a) => Expr::neg(a.substitute(index, with)),
            Expr::Pow(a, n) => Expr::powi(a.substitute(index, with), *n),
            Expr::Call(f, a) => Expr::call(*f, a.substitute(index, with)),
        }
    }

    /// Highest coordinate index referenced plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(v) => v.index() + 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.arity().max(b.arity())
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.arity(),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.size() + b.size()
            }
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => 1 + a.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_float(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    // Debug formatting is the shortest representation that round-trips.
    let s = format!("{x:?}");
    f.write_str(&s)
}

fn write_const(f: &mut fmt::Formatter<'_>, c: Complex64) -> fmt::Result {
    if c.im == 0.0 {
        if c.re.is_sign_positive() {
            return write_float(f, c.re);
        }
        f.write_str("(-")?;
        write_float(f, -c.re)?;
        return f.write_str(")");
    }
    f.write_str("(")?;
    if c.re != 0.0 || c.re.is_sign_negative() {
        if c.re.is_sign_negative() {
            f.write_str("-")?;
        }
        write_float(f, c.re.abs())?;
        f.write_str(if c.im < 0.0 { "-" } else { "+" })?;
    } else if c.im < 0.0 {
        f.write_str("-")?;
    }
    write_float(f, c.im.abs())?;
    f.write_str("*i)")
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write_const(f, *c),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Add(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" + ")?;
                write_child(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" - ")?;
                write_child(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("*")?;
                write_child(f, b, 3)
            }
            Expr::Div(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("/")?;
                write_child(f, b, 3)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 3)
            }
            Expr::Pow(a, n) => {
                write_child(f, a, 5)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::add(self, rhs)
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sub(self, rhs)
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::mul(self, rhs)
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::div(self, rhs)
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::neg(self)
    }
}
