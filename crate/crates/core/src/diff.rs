//! Central differences with one Richardson extrapolation step.

use crate::error::{Error, Result};

/// Relative step used for every energy derivative in the crate.
pub const RELATIVE_STEP: f64 = 1e-6;

/// A derivative estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivative {
    /// Extrapolated value `(4 D(h/2) - D(h)) / 3`.
    pub value: f64,
    /// `|value - D(h/2)|`, a conservative truncation estimate.
    pub error: f64,
}

/// Differentiates `f` at `x` with step `h`.
///
/// `margin` is the distance from `x` to the nearest point where `f` stops
/// being defined; the stencil must fit inside it.
pub fn central_richardson<F>(mut f: F, x: f64, h: f64, margin: f64) -> Result<Derivative>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(h > 0.0) || !(margin > 2.0 * h) {
        return Err(Error::StepUnderflow { margin, step: h });
    }
    let wide = (f(x + h)? - f(x - h)?) / (2.0 * h);
    let half = 0.5 * h;
    let narrow = (f(x + half)? - f(x - half)?) / h;
    let value = (4.0 * narrow - wide) / 3.0;
    Ok(Derivative { value, error: (value - narrow).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact_to_fourth_order() {
        let d = central_richardson(|x| Ok(x * x * x * x), 1.3, 1e-3, 1.0).unwrap();
        assert!((d.value - 4.0 * 1.3f64.powi(3)).abs() < 1e-9);
    }

    #[test]
    fn transcendental() {
        let d = central_richardson(|x| Ok(x.sin()), 0.4, 1e-4, 1.0).unwrap();
        assert!((d.value - 0.4f64.cos()).abs() < 1e-11);
        assert!(d.error < 1e-7);
    }

    #[test]
    fn step_must_fit() {
        let err = central_richardson(Ok, 1.0, 1e-3, 1e-3).unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. }));
        assert!(central_richardson(Ok, 1.0, 0.0, 1.0).is_err());
    }
}
