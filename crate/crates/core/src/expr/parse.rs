use num_complex::Complex64;
use thiserror::Error;

use super::ast::{Builtin, Expr, Var};

/// Parse failure. Offsets are one-based character columns; an error at the
/// end of input points one past the last character.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ParseError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => {
                *offset
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Int(i64),
    Ident(String),
    Op(char),
    End,
}

struct Lexer {
    chars: Vec<char>,
    pos: usize,
}

impl Lexer {
    fn new(src: &str) -> Self {
        Lexer {
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    /// Returns the next token with its one-based start column.
    fn next(&mut self) -> Result<(Tok, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let col = start + 1;
        let Some(&c) = self.chars.get(self.pos) else {
            return Ok((Tok::End, col));
        };
        if c.is_ascii_digit() || c == '.' {
            let mut is_int = true;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos < self.chars.len() && self.chars[self.pos] == '.' {
                is_int = false;
                self.pos += 1;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
            if self.pos < self.chars.len() && matches!(self.chars[self.pos], 'e' | 'E') {
                let save = self.pos;
                self.pos += 1;
                if self.pos < self.chars.len() && matches!(self.chars[self.pos], '+' | '-') {
                    self.pos += 1;
                }
                if self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                    is_int = false;
                    while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                } else {
                    self.pos = save;
                }
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            if is_int {
                if let Ok(n) = text.parse::<i64>() {
                    return Ok((Tok::Int(n), col));
                }
            }
            return text
                .parse::<f64>()
                .map(|v| (Tok::Num(v), col))
                .map_err(|_| ParseError::Syntax {
                    offset: col,
                    message: format!("malformed number `{text}`"),
                });
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while self.pos < self.chars.len()
                && (self.chars[self.pos].is_ascii_alphanumeric() || self.chars[self.pos] == '_')
            {
                self.pos += 1;
            }
            let text: String = self.chars[start..self.pos].iter().collect();
            return Ok((Tok::Ident(text), col));
        }
        if "+-*/^()".contains(c) {
            self.pos += 1;
            return Ok((Tok::Op(c), col));
        }
        Err(ParseError::Syntax {
            offset: col,
            message: format!("unexpected character `{c}`"),
        })
    }
}

struct Parser {
    lexer: Lexer,
    tok: Tok,
    col: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        let mut lexer = Lexer::new(src);
        let (tok, col) = lexer.next()?;
        Ok(Parser { lexer, tok, col })
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (tok, col) = self.lexer.next()?;
        self.tok = tok;
        self.col = col;
        Ok(())
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, op: char) -> Result<(), ParseError> {
        if self.tok == Tok::Op(op) {
            self.bump()
        } else if self.tok == Tok::End {
            self.error(format!("expected `{op}`, found end of input"))
        } else {
            self.error(format!("expected `{op}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.tok {
                Tok::Op('+') => {
                    self.bump()?;
                    lhs = Expr::add(lhs, self.term()?);
                }
                Tok::Op('-') => {
                    self.bump()?;
                    lhs = Expr::sub(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            match self.tok {
                Tok::Op('*') => {
                    self.bump()?;
                    lhs = Expr::mul(lhs, self.factor()?);
                }
                Tok::Op('/') => {
                    self.bump()?;
                    lhs = Expr::div(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        match self.tok {
            Tok::Op('-') => {
                self.bump()?;
                return Ok(Expr::neg(self.factor()?));
            }
            Tok::Op('+') => {
                self.bump()?;
                return self.factor();
            }
            _ => {}
        }
        let base = self.base()?;
        if self.tok != Tok::Op('^') {
            return Ok(base);
        }
        self.bump()?;
        let negative = if self.tok == Tok::Op('-') {
            self.bump()?;
            true
        } else {
            false
        };
        let Tok::Int(n) = self.tok else {
            return self.error("exponent must be an integer literal");
        };
        let n = if negative { -n } else { n };
        let n = i32::try_from(n).or_else(|_| self.error("exponent out of range"))?;
        self.bump()?;
        Ok(Expr::powi(base, n))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let col = self.col;
        match self.tok.clone() {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expr::real(v))
            }
            Tok::Int(n) => {
                self.bump()?;
                Ok(Expr::real(n as f64))
            }
            Tok::Op('(') => {
                self.bump()?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump()?;
                if let Some(f) = Builtin::from_name(&name) {
                    if self.tok != Tok::Op('(') {
                        return self.error(format!("`{name}` must be applied to an argument"));
                    }
                    self.bump()?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::call(f, arg));
                }
                let atom = match name.as_str() {
                    "i" => Expr::constant(Complex64::new(0.0, 1.0)),
                    "pi" => Expr::real(std::f64::consts::PI),
                    "z" => Expr::Var(Var::Z),
                    _ => match coordinate(&name) {
                        Some(k) => Expr::Var(Var::X(k)),
                        None => {
                            return Err(ParseError::UnknownIdentifier { name, offset: col });
                        }
                    },
                };
                if self.tok == Tok::Op('(') {
                    return self.error(format!("`{name}` is not a function"));
                }
                Ok(atom)
            }
            Tok::End => self.error("unexpected end of input"),
            Tok::Op(c) => self.error(format!("unexpected `{c}`")),
        }
    }
}

fn coordinate(name: &str) -> Option<u8> {
    let rest = name.strip_prefix('x')?;
    let k: u8 = rest.parse().ok()?;
    (rest.len() == 1 && (1..=9).contains(&k)).then_some(k)
}

/// Parses an expression of the grammar described in the module docs.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.error("trailing input");
    }
    Ok(e)
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}
