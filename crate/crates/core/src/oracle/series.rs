//! Power series `J_n(x) = Σ_k (-1)^k (x/2)^{n+2k} / (k!(n+k)!)`.
//!
//! At `x = 30` the terms reach ~1e11 while the sum is O(0.1), so plain f64
//! summation would lose eleven digits. Everything here runs in double-double
//! (≈32 significant digits).

use crate::error::{Error, Result};

pub const DEFAULT_SERIES_TERMS: usize = 500;
const TERM_FLOOR: f64 = 1e-18;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    const ONE: Self = DoubleDouble { hi: 1.0, lo: 0.0 };
    const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };

    fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    fn normalise(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        DoubleDouble { hi, lo }
    }

    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = two_sum(s, e + t);
        Self::normalise(s, e + f)
    }

    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        Self::normalise(p, e + (self.hi * o.lo + self.lo * o.hi))
    }

    fn div_f64(self, d: f64) -> Self {
        let q1 = self.hi / d;
        let (p, e) = two_prod(q1, d);
        let r = ((self.hi - p) - e + self.lo) / d;
        Self::normalise(q1, r)
    }

    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `J_n(x)` for `n >= 0` by the power series, summing at most `terms` terms
/// and stopping once a term past the series peak drops below 1e-18.
pub fn bessel_j_series(n: u32, x: f64, terms: usize) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("series argument {x}")));
    }
    if x < 0.0 {
        let v = bessel_j_series(n, -x, terms)?;
        return Ok(if n % 2 == 1 { -v } else { v });
    }
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let half = DoubleDouble::from_f64(0.5 * x);
    // (x/2)^n / n!
    let mut term = DoubleDouble::ONE;
    for k in 1..=n {
        term = term.mul(half).div_f64(k as f64);
        if !term.hi.is_finite() {
            return Err(Error::Overflow(format!("leading term of J_{n}({x})")));
        }
    }
    if term.hi == 0.0 {
        return Ok(0.0);
    }
    let neg_sq = half.mul(half).neg();
    let mut sum = DoubleDouble::ZERO;
    for k in 0..terms {
        if k > 0 {
            term = term.mul(neg_sq).div_f64((k as f64) * (n as f64 + k as f64));
        }
        if !term.hi.is_finite() {
            return Err(Error::Overflow(format!("term {k} of J_{n}({x})")));
        }
        sum = sum.add(term);
        if term.hi.abs() < TERM_FLOOR && (k as f64) > 0.5 * x {
            return Ok(sum.to_f64());
        }
    }
    Err(Error::invalid(
        "terms",
        format!("{terms} terms do not converge J_{n}({x})"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j_series(0, 0.0, 10).unwrap(), 1.0);
        assert_eq!(bessel_j_series(1, 0.0, 10).unwrap(), 0.0);
    }

    #[test]
    fn reference_values() {
        // 30-digit references
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (5, 10.0, -0.234_061_528_186_793_6),
            (10, 10.0, 0.207_486_106_633_358_9),
        ];
        for (n, x, want) in cases {
            let got = bessel_j_series(n, x, DEFAULT_SERIES_TERMS).unwrap();
            assert!((got - want).abs() < 1e-15, "J_{n}({x}) = {got}");
        }
    }

    #[test]
    fn survives_cancellation_at_large_argument() {
        // J_0(30) = -0.08636798358104...
        let got = bessel_j_series(0, 30.0, DEFAULT_SERIES_TERMS).unwrap();
        assert!((got + 0.086_367_983_581_040_2).abs() < 1e-15, "{got}");
    }

    #[test]
    fn too_few_terms_is_an_error() {
        assert!(bessel_j_series(0, 20.0, 5).is_err());
    }

    #[test]
    fn double_double_keeps_low_bits() {
        let a = DoubleDouble::from_f64(1.0).add(DoubleDouble::from_f64(1e-20));
        let b = a.add(DoubleDouble::from_f64(-1.0));
        assert_eq!(b.to_f64(), 1e-20);
    }
}
