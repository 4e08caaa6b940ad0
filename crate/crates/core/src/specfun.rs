//! Integer-order Bessel functions of the first kind, `J_n(x)` for real `x`.
//!
//! Values come from Miller's backward recurrence normalised with
//! `J_0 + 2·Σ J_{2k} = 1`. Forward recurrence is unstable once `n > x`; the
//! backward direction is stable for every order, and one pass yields the whole
//! row `J_0..J_N` at once.

use crate::error::{Error, Result};

/// Largest order accepted by [`bessel_j`].
pub const MAX_ORDER: u32 = 10_000;

const SMALL_ARGUMENT: f64 = 1e-5;
const RESCALE_ABOVE: f64 = 1e250;
const RESCALE_BY: f64 = 1e-250;

/// `J_n(u)` for every order in `n_min..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselRow {
    pub u: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub values: Vec<f64>,
}

impl BesselRow {
    /// `J_n(u)`; panics when `n` is outside the stored range.
    pub fn get(&self, n: i64) -> f64 {
        assert!(
            (self.n_min..=self.n_max).contains(&n),
            "order {n} outside [{}, {}]",
            self.n_min,
            self.n_max
        );
        self.values[(n - self.n_min) as usize]
    }

    pub fn orders(&self) -> impl Iterator<Item = i64> {
        self.n_min..=self.n_max
    }
}

/// Starting order for the backward recurrence.
fn start_order(n: u32, x: f64) -> usize {
    let base = (n as f64).max(x.ceil());
    (base + 15.0 + (10.0 * x.cbrt()).ceil()) as usize
}

/// `J_0(x)..=J_n(x)` for `x >= 0`.
fn nonnegative_orders(n: u32, x: f64) -> Vec<f64> {
    let n = n as usize;
    let mut out = vec![0.0; n + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < SMALL_ARGUMENT {
        // Two series terms; the third is below (x/2)^4 / 2 ~ 1e-21.
        let half = 0.5 * x;
        let mut lead = 1.0; // (x/2)^k / k!
        for (k, slot) in out.iter_mut().enumerate() {
            if k > 0 {
                lead *= half / k as f64;
            }
            if lead == 0.0 {
                break;
            }
            *slot = lead * (1.0 - half * half / (k as f64 + 1.0));
        }
        return out;
    }

    let start = start_order(n as u32, x);
    let mut row = vec![0.0; start + 2];
    row[start] = 1e-30;
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let next = 2.0 * k as f64 / x * row[k] - row[k + 1];
        row[k - 1] = next;
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * next;
        }
        if next.abs() > RESCALE_ABOVE {
            for v in &mut row[k - 1..] {
                *v *= RESCALE_BY;
            }
            norm *= RESCALE_BY;
        }
    }
    norm += row[0];
    for (slot, v) in out.iter_mut().zip(&row) {
        *slot = v / norm;
    }
    out
}

fn check_argument(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("Bessel argument {x}")))
    }
}

fn reflect(n: i64, value: f64) -> f64 {
    if n.rem_euclid(2) == 1 {
        -value
    } else {
        value
    }
}

/// `J_n(x)` to about 1e-15 absolute for moderate `x`.
///
/// Negative orders use `J_{-n}(x) = (-1)^n J_n(x)` and negative arguments
/// `J_n(-x) = (-1)^n J_n(x)`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    check_argument(x)?;
    let order = n.unsigned_abs();
    if order > MAX_ORDER as u64 {
        return Err(Error::invalid(
            "n",
            format!("|n| must not exceed {MAX_ORDER}"),
        ));
    }
    let row = nonnegative_orders(order as u32, x.abs());
    let mut value = row[order as usize];
    if n < 0 {
        value = reflect(n, value);
    }
    if x < 0.0 {
        value = reflect(n, value);
    }
    Ok(value)
}

/// Bulk evaluation of `J_n(u)` for `n_min..=n_max` from a single backward pass.
pub fn bessel_row(u: f64, n_min: i64, n_max: i64) -> Result<BesselRow> {
    check_argument(u)?;
    if n_min > n_max {
        return Err(Error::invalid(
            "orders",
            format!("empty range [{n_min}, {n_max}]"),
        ));
    }
    let top = n_min.unsigned_abs().max(n_max.unsigned_abs());
    if top > MAX_ORDER as u64 {
        return Err(Error::invalid(
            "orders",
            format!("|n| must not exceed {MAX_ORDER}"),
        ));
    }
    let base = nonnegative_orders(top as u32, u.abs());
    let values = (n_min..=n_max)
        .map(|n| {
            let mut v = base[n.unsigned_abs() as usize];
            if n < 0 {
                v = reflect(n, v);
            }
            if u < 0.0 {
                v = reflect(n, v);
            }
            v
        })
        .collect();
    Ok(BesselRow {
        u,
        n_min,
        n_max,
        values,
    })
}
