//! Formal series solutions of linear ODEs with polynomial coefficients.
//!
//! Series of `δ⁽ⁿ⁾` and of finite parts `f.p. t⁻ⁿ` are kept as Laurent
//! tails of their defining functions, where `t` acts as multiplication by
//! `τ` and `d/dt` as `d/dτ`. Coefficients are exact rationals. Solutions
//! are summed in closed form when they match `e^{−1/τ}` and checked by
//! pairing `L*φ` against them.

mod assemble;
mod operator;
mod solve;
mod tail;

pub use assemble::{
    assemble, bracket_check, classical_solution, classical_value, example_solutions, residual_check, taylor_at_zero,
    AssembledSolution, BracketCheck, ResidualReport, ResidualRow, ASSEMBLED_STRIP, MIN_PATTERN_TERMS,
};
pub use operator::{parse_coefficient, render_complex, to_complex64, ComplexRational, OperatorTerm, PolyCoeffOperator};
pub use solve::{admissibility, compensate_constant, solve_series, Admissibility, SeriesSolution, ROOT_DECAY_POWER};
pub use tail::{apply_operator, FormalLaurentTail, TailKind};
