use std::fmt;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::expr::{differentiate, Expr, GrowthClass};
use crate::hyper::TestFunction;
use crate::{Error, Result};

/// An exact complex rational `a + bi`.
pub type ComplexRational = Complex<BigRational>;

/// `c·tᵐ·(d/dt)ʲ`.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorTerm {
    pub power: usize,
    pub order: usize,
    pub coeff: ComplexRational,
}

impl OperatorTerm {
    /// Net index shift `j − m` on `τ⁻ⁿ`.
    pub fn shift(&self) -> i64 {
        self.order as i64 - self.power as i64
    }
}

/// `Σ c·tᵐ·(d/dt)ʲ` with polynomial coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoeffOperator {
    pub terms: Vec<OperatorTerm>,
}

impl PolyCoeffOperator {
    /// Drops zero terms and rejects repeated `(m, j)` pairs.
    pub fn new(terms: Vec<OperatorTerm>) -> Result<Self> {
        let mut out: Vec<OperatorTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            if out.iter().any(|o| o.power == t.power && o.order == t.order) {
                return Err(Error::InvalidArgument(format!(
                    "operator term t^{}*D^{} appears twice",
                    t.power, t.order
                )));
            }
            out.push(t);
        }
        out.retain(|t| !t.coeff.is_zero());
        if out.is_empty() {
            return Err(Error::InvalidArgument("the operator has no nonzero terms".into()));
        }
        out.sort_by_key(|t| (std::cmp::Reverse(t.power), std::cmp::Reverse(t.order)));
        Ok(PolyCoeffOperator { terms: out })
    }

    /// From `(m, j, c)` triples with rational `c` given as text.
    pub fn from_triples(triples: &[(usize, usize, &str)]) -> Result<Self> {
        let terms = triples
            .iter()
            .map(|&(power, order, c)| {
                Ok(OperatorTerm {
                    power,
                    order,
                    coeff: parse_coefficient(c)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PolyCoeffOperator::new(terms)
    }

    /// `t²·d/dt − 1`.
    pub fn example() -> Self {
        PolyCoeffOperator::from_triples(&[(2, 1, "1"), (0, 0, "-1")]).expect("valid operator")
    }

    /// Parses text such as `t^2*D - 1` or `1/2*t*D^2 + 3i`. Factors are
    /// joined by `*`; `D` is `d/dt`.
    pub fn parse(text: &str) -> Result<Self> {
        PolyCoeffOperator::new(parse_terms(text)?)
    }

    /// Smallest [`OperatorTerm::shift`].
    pub fn min_shift(&self) -> i64 {
        self.terms.iter().map(OperatorTerm::shift).min().unwrap_or(0)
    }

    pub fn max_order(&self) -> usize {
        self.terms.iter().map(|t| t.order).max().unwrap_or(0)
    }

    pub fn max_power(&self) -> usize {
        self.terms.iter().map(|t| t.power).max().unwrap_or(0)
    }

    /// `L e` for an expression in `z`.
    pub fn apply_expr(&self, e: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for t in &self.terms {
            let d = differentiate(e, t.order, 0);
            let term = Expr::mul(Expr::powi(Expr::z(), t.power as i32), d);
            acc = Expr::add(acc, Expr::mul(Expr::Const(to_complex64(&t.coeff)), term));
        }
        acc
    }

    /// `L* e = Σ c·(−d/dt)ʲ(tᵐ e)`.
    pub fn adjoint_expr(&self, e: &Expr) -> Expr {
        let mut acc = Expr::zero();
        for t in &self.terms {
            let inner = Expr::mul(Expr::powi(Expr::z(), t.power as i32), e.clone());
            let d = differentiate(&inner, t.order, 0);
            let sign = if t.order % 2 == 0 { 1.0 } else { -1.0 };
            acc = Expr::add(acc, Expr::mul(Expr::Const(sign * to_complex64(&t.coeff)), d));
        }
        acc
    }

    /// `L*φ` as a test function. The polynomial factor halves the
    /// exponential rate; the constant follows from the Cauchy estimate on a
    /// disc of radius `ρ = min(strip/2, 1)`.
    pub fn adjoint_test(&self, phi: &TestFunction) -> Result<TestFunction> {
        let rho = (0.5 * phi.strip).min(1.0);
        let (growth, constant) = match phi.growth {
            GrowthClass::ExponentialDecay(d) => {
                let mut c = 0.0;
                for t in &self.terms {
                    let m = t.power as i32;
                    // sup over x ≥ 0 of (x + ρ)^m e^{−dx/2}
                    let peak = 2.0 * m as f64 / d;
                    let poly = if peak > rho {
                        peak.powi(m) * (-(peak - rho) * d / 2.0).exp()
                    } else {
                        rho.powi(m)
                    };
                    let fact: f64 = (1..=t.order).map(|k| k as f64).product();
                    c += norm(&t.coeff) * fact / rho.powi(t.order as i32) * poly;
                }
                (GrowthClass::ExponentialDecay(d / 2.0), phi.constant * c * (d * rho).exp())
            }
            GrowthClass::Tempered(g) => {
                let mut c = 0.0;
                for t in &self.terms {
                    let fact: f64 = (1..=t.order).map(|k| k as f64).product();
                    c += norm(&t.coeff) * fact / rho.powi(t.order as i32) * (1.0 + rho).powi(t.power as i32);
                }
                let top = self.max_power() as f64;
                (GrowthClass::Tempered(g + top), phi.constant * c * (1.0 + rho).powf(g.abs()))
            }
            other => {
                return Err(Error::InvalidArgument(format!(
                    "adjoint of `{}` needs an exponentially decaying or tempered test function, got {other}",
                    phi.label
                )))
            }
        };
        Ok(TestFunction::new(
            format!("L*({})", phi.label),
            self.adjoint_expr(&phi.expr),
            phi.strip,
            growth,
            constant,
        ))
    }
}

impl fmt::Display for PolyCoeffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let mut c = render_complex(&t.coeff);
            let negative = c.starts_with('-') && t.coeff.im.is_zero();
            if negative {
                c.remove(0);
            }
            let sep = match (i, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            f.write_str(sep)?;
            let mut factors: Vec<String> = Vec::new();
            let unit = t.coeff.im.is_zero() && t.coeff.re.abs().is_one();
            if !unit || (t.power == 0 && t.order == 0) {
                factors.push(if t.coeff.im.is_zero() { c } else { format!("({c})") });
            }
            match t.power {
                0 => {}
                1 => factors.push("t".into()),
                m => factors.push(format!("t^{m}")),
            }
            match t.order {
                0 => {}
                1 => factors.push("D".into()),
                j => factors.push(format!("D^{j}")),
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, msg: &str) -> Error {
        let text: String = self.chars.iter().collect();
        Error::InvalidArgument(format!("operator `{text}` at {}: {msg}", self.pos))
    }

    fn integer(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect::<String>().parse().expect("digits"))
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.peek() != Some('^') {
            return Ok(1);
        }
        self.pos += 1;
        self.integer()
            .and_then(|n| n.to_usize())
            .ok_or_else(|| self.error("expected a nonnegative exponent"))
    }

    /// Unsigned decimal or fraction.
    fn number(&mut self) -> Result<BigRational> {
        let whole = self.integer().ok_or_else(|| self.error("expected a number"))?;
        let mut value = BigRational::from_integer(whole);
        if self.peek() == Some('.') {
            self.pos += 1;
            let start = self.pos;
            let frac = self.integer().ok_or_else(|| self.error("expected digits after `.`"))?;
            let scale = BigInt::from(10).pow((self.pos - start) as u32);
            value += BigRational::new(frac, scale);
        }
        if self.peek() == Some('/') && matches!(self.chars.get(self.pos + 1), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
            let den = self.integer().expect("digit follows");
            if den.is_zero() {
                return Err(self.error("division by zero"));
            }
            value /= BigRational::from_integer(den);
        }
        Ok(value)
    }

    fn term(&mut self) -> Result<OperatorTerm> {
        let mut coeff = ComplexRational::one();
        let mut power = 0;
        let mut order = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let mut v = ComplexRational::new(self.number()?, BigRational::zero());
                    if self.peek() == Some('i') {
                        self.pos += 1;
                        v = v * ComplexRational::i();
                    }
                    coeff = coeff * v;
                }
                Some('i') => {
                    self.pos += 1;
                    coeff = coeff * ComplexRational::i();
                }
                Some('(') => {
                    let close = self.chars[self.pos..]
                        .iter()
                        .position(|&c| c == ')')
                        .ok_or_else(|| self.error("unclosed `(`"))?;
                    let inner: String = self.chars[self.pos + 1..self.pos + close].iter().collect();
                    coeff = coeff * parse_coefficient(&inner)?;
                    self.pos += close + 1;
                }
                Some('t') => {
                    if order > 0 {
                        return Err(self.error("t after D does not commute; write c*t^m*D^j"));
                    }
                    self.pos += 1;
                    power += self.exponent()?;
                }
                Some('D') => {
                    self.pos += 1;
                    order += self.exponent()?;
                }
                Some(c) => return Err(self.error(&format!("unexpected `{c}`"))),
                None => return Err(self.error("unexpected end of input")),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
                continue;
            }
            break;
        }
        Ok(OperatorTerm { power, order, coeff })
    }
}

/// Terms of an operator written as text, with like terms merged.
fn parse_terms(text: &str) -> Result<Vec<OperatorTerm>> {
    let mut p = Parser {
        chars: text.chars().filter(|c| !c.is_whitespace()).collect(),
        pos: 0,
    };
    let mut raw: Vec<OperatorTerm> = Vec::new();
    let mut first = true;
    while p.pos < p.chars.len() || first {
        let sign = match p.peek() {
            Some('+') => {
                p.pos += 1;
                1
            }
            Some('-') => {
                p.pos += 1;
                -1
            }
            _ if first => 1,
            Some(c) => return Err(p.error(&format!("expected `+` or `-`, found `{c}`"))),
            None => break,
        };
        first = false;
        let mut t = p.term()?;
        if sign < 0 {
            t.coeff = -t.coeff;
        }
        match raw.iter_mut().find(|o| o.power == t.power && o.order == t.order) {
            Some(o) => o.coeff = &o.coeff + &t.coeff,
            None => raw.push(t),
        }
    }
    Ok(raw)
}

/// Parses an exact coefficient such as `3`, `-1/2`, `0.25`, `2i` or
/// `1/2+3i`.
pub fn parse_coefficient(text: &str) -> Result<ComplexRational> {
    match parse_terms(text)?.as_slice() {
        [t] if t.power == 0 && t.order == 0 => Ok(t.coeff.clone()),
        _ => Err(Error::InvalidArgument(format!("`{text}` is not a constant coefficient"))),
    }
}

pub fn to_complex64(c: &ComplexRational) -> Complex64 {
    Complex64::new(rational_to_f64(&c.re), rational_to_f64(&c.im))
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// `ln|r|`, exact in range for any size of numerator and denominator.
pub(crate) fn ln_abs(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_big(r.numer()) - ln_big(r.denom())
}

fn ln_big(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().expect("finite");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `|c|` in floating point.
pub(crate) fn norm(c: &ComplexRational) -> f64 {
    let re = ln_abs(&c.re);
    let im = ln_abs(&c.im);
    let m = re.max(im);
    if m == f64::NEG_INFINITY {
        return 0.0;
    }
    m.exp() * ((re - m).exp().powi(2) + (im - m).exp().powi(2)).sqrt()
}

/// `ln|c|`.
pub(crate) fn ln_norm(c: &ComplexRational) -> f64 {
    let re = ln_abs(&c.re);
    let im = ln_abs(&c.im);
    let m = re.max(im);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + 0.5 * ((re - m).exp().powi(2) + (im - m).exp().powi(2)).ln()
}

fn render_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `a`, `bi` or `a+bi` with exact rationals.
pub fn render_complex(c: &ComplexRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => render_rational(&c.re),
        (true, false) => format!("{}i", render_rational(&c.im)),
        (false, false) => {
            let im = render_rational(&c.im);
            if c.im.is_negative() {
                format!("{}{}i", render_rational(&c.re), im)
            } else {
                format!("{}+{}i", render_rational(&c.re), im)
            }
        }
    }
}
