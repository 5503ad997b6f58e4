//! Complex-analytic expressions.
//!
//! Defining functions and test functions are written in a small expression
//! language:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := ('-' | '+') factor | base ('^' ['-'] INT)?
//! base   := NUMBER | 'i' | 'pi' | IDENT | IDENT '(' expr ')' | '(' expr ')'
//! ```
//!
//! Identifiers are the variable `z`, the coordinates `x1` .. `x9`, and the
//! builtins `exp`, `sech`, `tanh` and `gaussian` (`gaussian(u) = exp(-u^2)`).
//! `z` and `x1` both name the first coordinate of the evaluation point.
//!
//! Trees are immutable once built. Constant sub-trees are folded while
//! parsing and while differentiating; no other simplification is attempted.

mod ast;
mod diff;
mod eval;
mod growth;
mod parse;

pub use ast::{Builtin, Expr, Var};
pub use diff::differentiate;
pub use eval::{EvalError, DEFAULT_POLE_EPS};
pub use growth::GrowthClass;
pub use parse::{parse_expr, ParseError};

#[cfg(test)]
mod tests;
