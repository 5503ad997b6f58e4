use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::QuadFailure;
use crate::Result;

// Kronrod 15-point abscissae on [0, 1]; odd indices are the Gauss 7-point nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Number of integrand evaluations per panel.
pub const NODES_PER_PANEL: usize = 15;

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn check(v: Complex64, t: f64) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(QuadFailure::NonFinite { at: format!("{t}") }.into())
    }
}

fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = check(f(c)?, c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = check(f(c - dx)?, c - dx)? + check(f(c + dx)?, c + dx)?;
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    Ok(Panel {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).norm(),
    })
}

struct Entry(f64, usize);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Entry {}
impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // largest error first; ties broken towards the lower index
        self.0
            .total_cmp(&other.0)
            .then_with(|| other.1.cmp(&self.1))
    }
}

/// Controls for one adaptive interval integration.
#[derive(Clone, Copy, Debug)]
pub struct Adaptive {
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Upper bound on panel length; `f64::INFINITY` for none.
    pub max_panel: f64,
}

/// Outcome of an adaptive interval integration.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: Complex64,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

/// Adaptive Gauss-Kronrod 7/15 on `[a, b]` with a global error queue.
///
/// The panel with the largest `|K - G|` is bisected until the summed estimate
/// is at most `abs_tol`. The final value is summed in left-to-right panel
/// order so the result does not depend on the refinement history.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: Adaptive) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Integral {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            nodes_used: 0,
        });
    }
    let len = (b - a).abs();
    let initial = if opts.max_panel.is_finite() {
        ((len / opts.max_panel).ceil() as usize).max(1)
    } else {
        1
    };
    let mut panels = Vec::with_capacity(initial * 4);
    let mut heap = BinaryHeap::new();
    let step = (b - a) / initial as f64;
    for i in 0..initial {
        let lo = a + step * i as f64;
        let hi = if i + 1 == initial { b } else { a + step * (i + 1) as f64 };
        let p = kronrod(&mut f, lo, hi)?;
        heap.push(Entry(p.error, panels.len()));
        panels.push(p);
    }
    let mut nodes = NODES_PER_PANEL * initial;
    let mut total: f64 = panels.iter().map(|p| p.error).sum();
    let mut splits = 0;
    loop {
        if total <= opts.abs_tol {
            // the running sum drifts; confirm with an exact recount
            total = panels.iter().map(|p| p.error).sum();
            if total <= opts.abs_tol {
                break;
            }
        }
        if splits >= opts.max_subdivisions {
            return Err(QuadFailure::Convergence {
                subdivisions: splits,
                error_estimate: total,
            }
            .into());
        }
        let Entry(_, idx) = heap.pop().expect("panel queue is never empty");
        let p = panels[idx];
        let m = 0.5 * (p.a + p.b);
        if m <= p.a.min(p.b) || m >= p.a.max(p.b) {
            return Err(QuadFailure::Convergence {
                subdivisions: splits,
                error_estimate: total,
            }
            .into());
        }
        let left = kronrod(&mut f, p.a, m)?;
        let right = kronrod(&mut f, m, p.b)?;
        nodes += 2 * NODES_PER_PANEL;
        splits += 1;
        total += left.error + right.error - p.error;
        panels[idx] = left;
        heap.push(Entry(left.error, idx));
        heap.push(Entry(right.error, panels.len()));
        panels.push(right);
    }
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    if b < a {
        panels.reverse();
    }
    let value = panels.iter().fold(Complex64::new(0.0, 0.0), |s, p| s + p.value);
    Ok(Integral {
        value,
        error_estimate: total,
        nodes_used: nodes,
    })
}

/// The 15-point Kronrod rule on `[a, b]` as `(node, weight)` pairs, in
/// increasing node order.
pub fn kronrod_rule(a: f64, b: f64) -> [(f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0); 15];
    for j in 0..7 {
        out[j] = (c - h * XGK[j], h * WGK[j]);
        out[14 - j] = (c + h * XGK[j], h * WGK[j]);
    }
    out[7] = (c, h * WGK[7]);
    out
}
