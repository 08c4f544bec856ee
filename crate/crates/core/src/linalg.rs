//! Dense complex linear solve with partial pivoting.

use crate::error::{Error, Result};
use crate::Complex64;

/// Solves `M x = b` in place; `matrix` is row-major `n × n`, `rhs` becomes `x`.
pub fn solve_in_place(matrix: &mut [Complex64], rhs: &mut [Complex64]) -> Result<()> {
    let n = rhs.len();
    assert_eq!(matrix.len(), n * n, "matrix must be n × n");
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                matrix[i * n + col]
                    .norm()
                    .partial_cmp(&matrix[j * n + col].norm())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        let p = matrix[pivot * n + col];
        if p.norm() == 0.0 || !p.norm().is_finite() {
            return Err(Error::Singular);
        }
        if pivot != col {
            for j in 0..n {
                matrix.swap(pivot * n + j, col * n + j);
            }
            rhs.swap(pivot, col);
        }
        for row in col + 1..n {
            let factor = matrix[row * n + col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for j in col..n {
                let v = matrix[col * n + j];
                matrix[row * n + j] -= factor * v;
            }
            let v = rhs[col];
            rhs[row] -= factor * v;
        }
    }
    for row in (0..n).rev() {
        let mut acc = rhs[row];
        for j in row + 1..n {
            acc -= matrix[row * n + j] * rhs[j];
        }
        rhs[row] = acc / matrix[row * n + row];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn small_system() {
        let m = [c(0.0, 0.0), c(2.0, 1.0), c(1.0, 0.0), c(1.0, -1.0), c(3.0, 0.0), c(0.0, 1.0), c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)];
        let x = [c(1.0, 2.0), c(-1.0, 0.5), c(0.25, -3.0)];
        let mut b = [c(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                b[i] += m[i * 3 + j] * x[j];
            }
        }
        let mut mm = m;
        solve_in_place(&mut mm, &mut b).unwrap();
        for i in 0..3 {
            assert!((b[i] - x[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn singular() {
        let mut m = [c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)];
        let mut b = [c(1.0, 0.0), c(1.0, 0.0)];
        assert_eq!(solve_in_place(&mut m, &mut b), Err(Error::Singular));
    }
}
