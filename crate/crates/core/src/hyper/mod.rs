//! Hyperfunctions on the real line and their duality pairing.
//!
//! A [`Hyperfunction1D`] holds two defining functions, `F₊` on a strip above
//! the real axis and `F₋` below it, and stands for the boundary value
//! `F₊(x + i0) − F₋(x − i0)`. Pairing against an analytic test function is
//!
//! ```text
//! ⟨f, φ⟩ = ∫_{Im z = η} F₊ φ dz − ∫_{Im z = −η} F₋ φ dz
//! ```
//!
//! with both lines traversed left to right. Truncated at `|Re z| = R`, the two
//! lines are joined by short vertical sides, which makes the truncated value
//! equal to `∫_{−R}^{R} f φ dx` exactly; the rest is bounded from the declared
//! growth classes.

mod corpus;
mod defining;
mod object;
mod operator;
mod pairing;
mod standardize;

pub use corpus::{builtin_corpus, builtin_records, find, load_corpus, parse_corpus, CorpusRecord};
pub use defining::{DefiningFunction, NumericFn};
pub use object::{
    delta_derivative, embed_real_analytic, standard_suite, Hyperfunction1D, TestFunction,
    DEFAULT_ENVELOPE_CONSTANT, GROWTH_SAMPLE_RADII,
};
pub use operator::{apply_local_operator, CoefficientGenerator, LocalOperator, ROOT_TEST_TERMS};
pub use pairing::{
    default_offset, pair, pair_at, pair_kernel, pairing_tail, product_tail, scale_pair,
};
pub use standardize::{cauchy_hilbert_kernel, standardize, standardize_on, standardized_value};

#[cfg(test)]
mod tests;
