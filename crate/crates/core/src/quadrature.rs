//! Composite Simpson quadrature on uniform odd-length grids.

use std::ops::{Add, Mul};

/// Composite Simpson rule for samples `y` on a uniform grid with spacing `h`.
///
/// Panics if `y.len()` is even or below 3.
pub fn simpson<T>(y: &[T], h: f64) -> T
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    let n = y.len();
    assert!(
        n >= 3 && n % 2 == 1,
        "Simpson needs an odd number of samples >= 3, got {n}"
    );
    let mut odd = y[1];
    let mut i = 3;
    while i < n - 1 {
        odd = odd + y[i];
        i += 2;
    }
    let mut acc = y[0] + y[n - 1] + odd * 4.0;
    let mut i = 2;
    while i < n - 1 {
        acc = acc + y[i] * 2.0;
        i += 2;
    }
    acc * (h / 3.0)
}
