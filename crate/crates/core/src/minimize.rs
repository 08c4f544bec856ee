//! Golden-section search for a bracketed minimum.

/// `(3 - √5) / 2`.
const SHRINK: f64 = 0.381_966_011_250_105_1;

/// Minimises `f` on `[lo, hi]` until the bracket is narrower than `xtol`.
///
/// Returns the abscissa and value of the best point seen.
pub fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = lo + SHRINK * (hi - lo);
    let mut x2 = hi - SHRINK * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // bounded: each step shrinks by 0.618
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = lo + SHRINK * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = hi - SHRINK * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
