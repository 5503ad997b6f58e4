use thiserror::Error;

use crate::expr::{EvalError, ParseError};

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum QuadFailure {
    #[error("no convergence after {subdivisions} subdivisions (error estimate {error_estimate:e})")]
    Convergence {
        subdivisions: usize,
        error_estimate: f64,
    },
    #[error("tail integral diverges (combined exponent {exponent} >= -1)")]
    DivergentTail { exponent: f64 },
    #[error("tail bound {bound:e} at radius {radius} exceeds the requested tolerance {abs_tol:e}")]
    TailNotAchievable {
        radius: f64,
        bound: f64,
        abs_tol: f64,
    },
    #[error("box integration supports at most 3 dimensions, got {0}")]
    Dimension(usize),
    #[error("non-finite integrand value at {at}")]
    NonFinite { at: String },
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quad(#[from] QuadFailure),
    #[error("growth verification failed: {0}")]
    Growth(String),
    #[error("inadmissible pairing: {0}")]
    Inadmissible(String),
    #[error("local operator coefficients are not admissible: {0}")]
    Admissibility(String),
    #[error("operation requires an asymptotic hyperfunction, `{label}` is {class}")]
    NotAsymptotic { label: String, class: String },
    #[error("operation requires symbolic defining functions: {0}")]
    NotSymbolic(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("multiplier does not dominate the transform: {0}")]
    Domination(String),
    #[error("moment growth bound violated at k = {k}: |mu| = {value:e} > {bound:e}")]
    MomentBound { k: usize, value: f64, bound: f64 },
    #[error("series truncation overflow: degree {degree} exceeds the truncation order {max}")]
    TruncationOverflow { degree: usize, max: usize },
    #[error("recurrence breaks down at index {index}: zero pivot")]
    RecurrenceBreakdown { index: usize },
    #[error("corpus: {0}")]
    Corpus(String),
}

pub type Result<T> = std::result::Result<T, Error>;
