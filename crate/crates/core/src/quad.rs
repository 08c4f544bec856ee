//! Adaptive Simpson quadrature for smooth panels.
//!
//! Callers split piecewise-smooth integrands at their kinks and integrate each
//! panel separately.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Integral estimate with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    /// Estimated integral.
    pub value: f64,
    /// Sum of the local `|S₂ - S₁| / 15` estimates.
    pub error: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

const MAX_DEPTH: u32 = 48;

struct Panel {
    lo: f64,
    hi: f64,
    f_lo: f64,
    f_mid: f64,
    f_hi: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn simpson(lo: f64, hi: f64, f_lo: f64, f_mid: f64, f_hi: f64) -> f64 {
    (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
}

/// Integrates `f` over `[lo, hi]` to relative tolerance `rel_tol`.
///
/// The tolerance is applied to the magnitude of a 16-panel composite
/// estimate, so an integrand that is identically zero converges at once.
pub fn adaptive_simpson<F>(mut f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<Quadrature>
where
    F: FnMut(f64) -> f64,
{
    if hi <= lo {
        return Ok(Quadrature { value: 0.0, error: 0.0, evaluations: 0 });
    }
    let mut evaluations = 0;
    let mut eval = |x: f64| {
        evaluations += 1;
        f(x)
    };

    // coarse composite pass fixes the absolute scale
    const COARSE: usize = 16;
    let width = (hi - lo) / COARSE as f64;
    let mut nodes = Vec::with_capacity(2 * COARSE + 1);
    for i in 0..=2 * COARSE {
        let x = if i == 2 * COARSE { hi } else { lo + 0.5 * width * i as f64 };
        nodes.push((x, eval(x)));
    }
    let mut scale = 0.0;
    let mut stack = Vec::with_capacity(64);
    for i in 0..COARSE {
        let (a, fa) = nodes[2 * i];
        let (_, fm) = nodes[2 * i + 1];
        let (b, fb) = nodes[2 * i + 2];
        let whole = simpson(a, b, fa, fm, fb);
        scale += whole.abs();
        stack.push(Panel { lo: a, hi: b, f_lo: fa, f_mid: fm, f_hi: fb, whole, tol: 0.0, depth: 0 });
    }
    let abs_tol = rel_tol * scale / COARSE as f64;
    for p in stack.iter_mut() {
        p.tol = abs_tol;
    }

    let mut value = 0.0;
    let mut error = 0.0;
    while let Some(p) = stack.pop() {
        let mid = 0.5 * (p.lo + p.hi);
        let left_mid = 0.5 * (p.lo + mid);
        let right_mid = 0.5 * (mid + p.hi);
        let f_lm = eval(left_mid);
        let f_rm = eval(right_mid);
        let left = simpson(p.lo, mid, p.f_lo, f_lm, p.f_mid);
        let right = simpson(mid, p.hi, p.f_mid, f_rm, p.f_hi);
        let delta = left + right - p.whole;
        if delta.abs() <= 15.0 * p.tol {
            value += left + right + delta / 15.0;
            error += delta.abs() / 15.0;
            continue;
        }
        if p.depth >= MAX_DEPTH || !delta.is_finite() {
            return Err(Error::QuadratureNonconvergence { at: p.lo });
        }
        let tol = 0.5 * p.tol;
        let depth = p.depth + 1;
        stack.push(Panel { lo: p.lo, hi: mid, f_lo: p.f_lo, f_mid: f_lm, f_hi: p.f_mid, whole: left, tol, depth });
        stack.push(Panel { lo: mid, hi: p.hi, f_lo: p.f_mid, f_mid: f_rm, f_hi: p.f_hi, whole: right, tol, depth });
    }
    Ok(Quadrature { value, error, evaluations })
}
