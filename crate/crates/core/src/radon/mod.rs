//! The Radon transform of rapidly decreasing functions and point
//! combinations on `ℝⁿ` (`n ≤ 3`), with Helgason moments, the Radon
//! asymptotic expansion, Gevrey probes in `ω`, and the support criterion
//! from moments.
//!
//! A slice `ℛf(ω, ·)` is a hyperfunction in `t` whose defining functions on
//! both sides are `G(ω, τ) = (−1/2πi)∫ f(x)/(τ − ωx) dx`. A second route
//! recovers the same slice from `f̂(ρω)` by one-dimensional inverse Fourier
//! transform.

mod function;
mod gevrey;
mod helgason;
mod slice;
mod support;

pub use function::{
    builtin_radon_corpus, check_direction, complement_basis, monomial, multi_indices, sphere_directions, DeltaCombo,
    DeltaTerm, MultiDimFunction, MultiIndex, MultiIndexOperator, SmoothRapid, MAX_DIMENSION, MAX_TRUNCATION_RADIUS,
    RAY_SAMPLE_RADII,
};
pub use gevrey::{gevrey_probe, GevreyFit, GevreyOrder, GEVREY_HEADROOM, GEVREY_STEP, MAX_GEVREY_ORDER};
pub use helgason::{
    exact_rational, helgason_moment, helgason_moments, multi_moments, point_expansion_display, point_expansion_exact,
    radon_asymptotic_sum, random_directions, rational_max_abs, DisplayForm, HelgasonCheck, HelgasonMoment,
    HomogeneousPoly, RadonAsymptotic, RadonExpansion, RationalPoly, DEFAULT_HELGASON_CAP, HELGASON_CHECK_DIRECTIONS,
    HELGASON_TOLERANCE,
};
pub use slice::{
    cauchy_value, evenness_defect, radon_transform, radon_via_fourier, ray_transform, two_route_check,
    FourierRouteOptions, FourierSlice, RadonSlice, SliceDelta, SliceForm, TwoRouteDelta, SLICE_PANEL, SLICE_STRIP,
};
pub use support::{
    support_check, support_check_slices, EpsVerdict, SupportOptions, SupportReport, SupportSample, SUPPORT_RESIDUAL,
    SUPPORT_TAIL_FRACTION,
};

#[cfg(test)]
mod tests;
