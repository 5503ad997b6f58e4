//! Fourier transforms between hyperfunctions and smooth fields, moments and
//! their asymptotic expansions, and the infinite-product multipliers used to
//! write an asymptotic hyperfunction as an operator applied to a continuous
//! function.
//!
//! Transforms of asymptotic hyperfunctions are computed as contour
//! integrals, `f̂(ξ) = ⟨f, e^{−izξ}⟩`, so `δ` and its derivatives need no
//! special casing. Tempered inputs are rejected.

mod field;
mod moments;
mod multiplier;

pub use field::{
    fourier_derivative, fourier_transform, inverse_fourier, FieldFn, InverseOptions, SmoothField,
    SpatialEnvelope, DEFAULT_DERIVATIVE_CAP,
};
pub use moments::{
    asymptotic_sum, gaussian_ansatz_coefficients, moment, moments, parametric_order_check,
    realize_moments, remainder, remainder_moments, taylor_of_ft, AsymptoticSum, DualityCheck, MomentSequence,
    ParametricFit, Realization, TaylorReport, NOISE_FACTOR,
};
pub use multiplier::{
    apply_multiplier, build_multiplier, default_terms, structural_representation, Multiplier,
    MultiplierReport, MultiplierSample, StructuralCheck, StructuralOptions,
    StructuralRepresentation, WeightFunction, MAX_MULTIPLIER_TERMS, STRUCTURAL_TOLERANCE,
};

#[cfg(test)]
mod tests;
