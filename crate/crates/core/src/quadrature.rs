//! Globally adaptive Simpson quadrature.
//!
//! Panels are refined largest-error first until the summed Richardson error
//! estimate falls below `rel_tol * |integral|`. Refining globally rather than
//! recursively keeps integrable endpoint singularities (such as `h^-0.26`)
//! convergent. Callers that know where the integrand has kinks or jumps pass
//! them as breakpoints so that no panel straddles a discontinuity.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::{Error, Result};

/// Relative tolerance used by the physics modules.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

const INITIAL_PANELS: usize = 16;
const MAX_PANELS: usize = 200_000;

/// Integrates `f` over `[lo, hi]`.
pub fn integrate<F>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_with_breakpoints(f, &[lo, hi], rel_tol)
}

/// Integrates `f` over consecutive intervals `points[0]..points[1]..points[n]`.
///
/// Points must be non-decreasing; zero-width intervals contribute nothing.
pub fn integrate_with_breakpoints<F>(f: F, points: &[f64], rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if points.len() < 2 {
        return Ok(0.0);
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("quadrature tolerance must be positive, got {rel_tol}")));
    }
    if points.iter().any(|p| !p.is_finite()) || points.windows(2).any(|w| !(w[1] >= w[0])) {
        return Err(Error::Domain("quadrature breakpoints must be finite and non-decreasing".into()));
    }
    let fail = || Error::Quadrature { lo: points[0], hi: points[points.len() - 1], tolerance: rel_tol };

    let mut heap = BinaryHeap::new();
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b == a {
            continue;
        }
        let h = (b - a) / INITIAL_PANELS as f64;
        let mut fa = f(a);
        for i in 0..INITIAL_PANELS {
            let x0 = a + h * i as f64;
            let x2 = if i + 1 == INITIAL_PANELS { b } else { a + h * (i + 1) as f64 };
            let fb = f(x2);
            heap.push(Panel::new(&f, x0, x2, fa, f(0.5 * (x0 + x2)), fb));
            fa = fb;
        }
    }

    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if !value.is_finite() || !error.is_finite() {
            return Err(fail());
        }
        if error <= rel_tol * value.abs() || error == 0.0 {
            return Ok(value);
        }
        // Refine a batch of the worst panels before re-summing.
        let batch = (heap.len() / 8).max(1);
        for _ in 0..batch {
            let Some(worst) = heap.pop() else { break };
            if heap.len() + 2 > MAX_PANELS || worst.b - worst.a <= 4.0 * f64::EPSILON * worst.a.abs().max(worst.b.abs()) {
                return Err(fail());
            }
            let m = 0.5 * (worst.a + worst.b);
            heap.push(Panel::new(&f, worst.a, m, worst.fa, worst.flm, worst.fm));
            heap.push(Panel::new(&f, m, worst.b, worst.fm, worst.frm, worst.fb));
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    flm: f64,
    fm: f64,
    frm: f64,
    fb: f64,
    value: f64,
    error: f64,
}

impl Panel {
    fn new<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        let m = 0.5 * (a + b);
        let flm = f(0.5 * (a + m));
        let frm = f(0.5 * (m + b));
        let whole = simpson(a, b, fa, fm, fb);
        let halves = simpson(a, m, fa, flm, fm) + simpson(m, b, fm, frm, fb);
        let delta = halves - whole;
        Panel { a, b, fa, flm, fm, frm, fb, value: halves + delta / 15.0, error: delta.abs() / 15.0 }
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}
