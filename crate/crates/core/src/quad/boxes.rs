use num_complex::Complex64;

use super::gk::{self, Adaptive};
use super::QuadResult;
use crate::error::QuadFailure;
use crate::Result;

pub const MAX_BOX_DIMENSION: usize = 3;

/// `∫_box f(x) dx` for a box in ℝⁿ, `n <= 3`, by nested adaptive rules.
///
/// Each inner integral gets the tolerance `abs_tol / (2 * outer width)`, so the
/// propagated inner error stays within half the budget.
pub fn integrate_box<F>(
    f: F,
    bounds: &[(f64, f64)],
    abs_tol: f64,
    max_subdivisions: usize,
) -> Result<QuadResult>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let n = bounds.len();
    if n == 0 || n > MAX_BOX_DIMENSION {
        return Err(QuadFailure::Dimension(n).into());
    }
    let mut point = [0.0; MAX_BOX_DIMENSION];
    let mut nodes = 0;
    let r = nested(&f, bounds, 0, &mut point, abs_tol, max_subdivisions, &mut nodes)?;
    Ok(QuadResult {
        value: r.0,
        error_estimate: r.1,
        tail_bound: 0.0,
        nodes_used: nodes,
    })
}

fn nested<F>(
    f: &F,
    bounds: &[(f64, f64)],
    axis: usize,
    point: &mut [f64; MAX_BOX_DIMENSION],
    abs_tol: f64,
    max_subdivisions: usize,
    nodes: &mut usize,
) -> Result<(Complex64, f64)>
where
    F: Fn(&[f64]) -> Result<Complex64>,
{
    let n = bounds.len();
    let (a, b) = bounds[axis];
    let opts = Adaptive {
        abs_tol: if axis + 1 == n { abs_tol } else { abs_tol / 2.0 },
        max_subdivisions,
        max_panel: f64::INFINITY,
    };
    if axis + 1 == n {
        let r = gk::integrate(
            |t| {
                point[axis] = t;
                f(&point[..n])
            },
            a,
            b,
            opts,
        )?;
        *nodes += r.nodes_used;
        return Ok((r.value, r.error_estimate));
    }
    let inner_tol = abs_tol / (2.0 * (b - a).abs().max(1.0));
    let mut worst_inner: f64 = 0.0;
    let mut inner_nodes = 0;
    let r = gk::integrate(
        |t| {
            point[axis] = t;
            let (v, e) = nested(
                f,
                bounds,
                axis + 1,
                point,
                inner_tol,
                max_subdivisions,
                &mut inner_nodes,
            )?;
            worst_inner = worst_inner.max(e);
            Ok(v)
        },
        a,
        b,
        opts,
    )?;
    *nodes += r.nodes_used + inner_nodes;
    let width = (b - a).abs();
    Ok((r.value, r.error_estimate + width * worst_inner))
}
