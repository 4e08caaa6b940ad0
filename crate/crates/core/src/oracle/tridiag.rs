//! Thomas algorithm for complex tridiagonal systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Solves `A x = rhs` in place for tridiagonal `A` with sub-diagonal `lower`
/// (`n-1`), diagonal `diag` (`n`) and super-diagonal `upper` (`n-1`).
/// `scratch` must hold `n` elements. No pivoting; intended for diagonally
/// dominant systems such as `1 + iΔt/2·H`.
pub(crate) fn solve_in_place(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &mut [Complex64],
    scratch: &mut [Complex64],
) -> Result<()> {
    let n = diag.len();
    if n == 0 || lower.len() + 1 != n || upper.len() + 1 != n || rhs.len() != n || scratch.len() < n
    {
        return Err(Error::invalid("tridiagonal", "inconsistent band lengths"));
    }
    let mut pivot = diag[0];
    if pivot.norm() == 0.0 {
        return Err(Error::invalid("tridiagonal", "zero pivot at row 0"));
    }
    rhs[0] /= pivot;
    for i in 1..n {
        scratch[i - 1] = upper[i - 1] / pivot;
        pivot = diag[i] - lower[i - 1] * scratch[i - 1];
        if pivot.norm() == 0.0 {
            return Err(Error::invalid(
                "tridiagonal",
                format!("zero pivot at row {i}"),
            ));
        }
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= scratch[i] * next;
    }
    Ok(())
}

/// Allocating wrapper around the Thomas sweep.
pub fn solve_tridiagonal(
    lower: &[Complex64],
    diag: &[Complex64],
    upper: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let mut x = rhs.to_vec();
    let mut scratch = vec![Complex64::new(0.0, 0.0); diag.len()];
    solve_in_place(lower, diag, upper, &mut x, &mut scratch)?;
    Ok(x)
}
