//! Static, market-side quantities: price/return transforms, the equilibrium
//! ground state of the well, a Gaussian reference curve and the stock-mass
//! estimate from the minimum-uncertainty relation `Δ℘·ΔT = ħ/2`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Display width of the Gaussian reference curve.
pub const DEFAULT_GAUSSIAN_SIGMA: f64 = 0.05;

fn require_positive(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, "must be positive"))
    }
}

/// Lowest eigenstate of the symmetric infinite well `[-d/2, d/2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub d: f64,
    pub energy: f64,
}

impl GroundState {
    /// `ψ0(r) = sqrt(2/d)·cos(πr/d)` inside the well, zero outside.
    pub fn value(&self, r: f64) -> f64 {
        let half = 0.5 * self.d;
        if r.abs() >= half {
            0.0
        } else {
            (2.0 / self.d).sqrt() * (PI * r / self.d).cos()
        }
    }

    pub fn density(&self, r: f64) -> f64 {
        let v = self.value(r);
        v * v
    }

    pub fn wavevector(&self) -> f64 {
        PI / self.d
    }

    pub fn sample(&self, grid: &[f64]) -> Vec<f64> {
        grid.iter().map(|&r| self.value(r)).collect()
    }
}

pub fn ground_state(d: f64, m: f64, hbar: f64) -> Result<GroundState> {
    require_positive("d", d)?;
    require_positive("m", m)?;
    require_positive("hbar", hbar)?;
    Ok(GroundState {
        d,
        energy: hbar * hbar * PI * PI / (2.0 * m * d * d),
    })
}

/// A price together with its rate of return against the previous close.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReturnCoordinate {
    pub r: f64,
    pub p: f64,
    pub p0: f64,
}

impl ReturnCoordinate {
    pub fn from_price(p: f64, p0: f64) -> Result<Self> {
        Ok(ReturnCoordinate {
            r: price_to_return(p, p0)?,
            p,
            p0,
        })
    }

    pub fn from_return(r: f64, p0: f64) -> Result<Self> {
        Ok(ReturnCoordinate {
            r,
            p: return_to_price(r, p0)?,
            p0,
        })
    }
}

/// `r = (p - p0)/p0`.
pub fn price_to_return(p: f64, p0: f64) -> Result<f64> {
    require_positive("p0", p0)?;
    Ok((p - p0) / p0)
}

pub fn return_to_price(r: f64, p0: f64) -> Result<f64> {
    require_positive("p0", p0)?;
    Ok(p0 + r * p0)
}

/// Stock mass from the equality case of `Δ℘·ΔT >= ħ/2` with `ΔT = m0·Δ(d℘/dt)`:
/// `m0 = ħ / (2·Δ℘·Δ(d℘/dt))`.
pub fn estimate_stock_mass(dp: f64, dpdt: f64, hbar: f64) -> Result<f64> {
    require_positive("dp", dp)?;
    require_positive("dpdt", dpdt)?;
    require_positive("hbar", hbar)?;
    Ok(hbar / (2.0 * dp * dpdt))
}

/// `Δ℘·ΔT` for a stock of mass `m0`.
pub fn uncertainty_product(dp: f64, m0: f64, dpdt: f64) -> f64 {
    dp * m0 * dpdt
}

/// Whether `Δ℘·ΔT >= ħ/2`, allowing a relative rounding slack of 1e-12.
pub fn uncertainty_check(dp: f64, m0: f64, dpdt: f64, hbar: f64) -> bool {
    uncertainty_product(dp, m0, dpdt) >= 0.5 * hbar * (1.0 - 1e-12)
}

/// Normal density with mean zero and standard deviation `sigma` on `grid`.
pub fn gaussian_reference(sigma: f64, grid: &[f64]) -> Result<Vec<f64>> {
    require_positive("sigma", sigma)?;
    let norm = 1.0 / (sigma * (2.0 * PI).sqrt());
    Ok(grid
        .iter()
        .map(|&r| norm * (-r * r / (2.0 * sigma * sigma)).exp())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{uniform_grid, HBAR_SI};
    use crate::quadrature::simpson;
    use proptest::prelude::*;

    #[test]
    fn ground_state_values() {
        let g = ground_state(0.2, 1e-30, HBAR_SI).unwrap();
        assert!((g.value(0.0) - 10f64.sqrt()).abs() < 1e-14);
        assert!((g.value(0.0) - 3.162_277_66).abs() < 1e-8);
        assert_eq!(g.value(0.1), 0.0);
        assert_eq!(g.value(-0.1), 0.0);
        assert_eq!(g.value(0.3), 0.0);
        // ħ²π²/(2·1e-30·0.04)
        assert!((g.energy / 1.3720e-36 - 1.0).abs() < 1e-4, "{}", g.energy);
    }

    #[test]
    fn ground_state_normalised_and_even() {
        let g = ground_state(0.2, 1e-30, HBAR_SI).unwrap();
        let grid = uniform_grid(-0.1, 0.1, 2001);
        let dens: Vec<f64> = grid.iter().map(|&r| g.density(r)).collect();
        assert!((simpson(&dens, grid[1] - grid[0]) - 1.0).abs() < 1e-10);
        for &r in &grid {
            assert_eq!(g.value(r), g.value(-r));
        }
    }

    #[test]
    fn density_peaks_at_centre_and_falls_off() {
        let g = ground_state(0.2, 1e-30, HBAR_SI).unwrap();
        let grid = uniform_grid(0.0, 0.1, 501);
        for w in grid.windows(2) {
            assert!(g.density(w[1]) < g.density(w[0]));
        }
    }

    #[test]
    fn rejects_non_positive_inputs() {
        assert!(ground_state(0.0, 1.0, 1.0).is_err());
        assert!(ground_state(0.2, -1.0, 1.0).is_err());
        assert!(price_to_return(1.0, 0.0).is_err());
        assert!(estimate_stock_mass(0.0, 1e-3, HBAR_SI).is_err());
        assert!(gaussian_reference(0.0, &[0.0]).is_err());
    }

    #[test]
    fn return_transforms() {
        assert!((price_to_return(11.0, 10.0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(price_to_return(10.0, 10.0).unwrap(), 0.0);
        let r = price_to_return(9.37, 10.0).unwrap();
        assert!((return_to_price(r, 10.0).unwrap() - 9.37).abs() < 1e-12);
        let c = ReturnCoordinate::from_price(9.0, 10.0).unwrap();
        assert!((c.r - (c.p - c.p0) / c.p0).abs() < 1e-15);
    }

    #[test]
    fn stock_mass_estimate() {
        let m0 = estimate_stock_mass(1e-3, 1e-3, HBAR_SI).unwrap();
        assert!((m0 / 5.2729e-29 - 1.0).abs() < 1e-4, "{m0}");
        assert_eq!(m0.log10().round(), -28.0);
        let halved = estimate_stock_mass(2e-3, 1e-3, HBAR_SI).unwrap();
        assert!((halved / m0 - 0.5).abs() < 1e-15);
        assert!(uncertainty_check(1e-3, m0, 1e-3, HBAR_SI));
        assert!(!uncertainty_check(1e-3, 0.5 * m0, 1e-3, HBAR_SI));
    }

    #[test]
    fn gaussian_reference_shape() {
        let peak = gaussian_reference(0.05, &[0.0]).unwrap()[0];
        assert!((peak - 7.978_845_608).abs() < 1e-8);
        let grid = uniform_grid(-1.0, 1.0, 4001);
        let g = gaussian_reference(0.05, &grid).unwrap();
        assert!((simpson(&g, grid[1] - grid[0]) - 1.0).abs() < 1e-10);
        for i in 0..grid.len() {
            assert_eq!(g[i], g[grid.len() - 1 - i]);
        }
    }

    proptest! {
        #[test]
        fn energy_scaling(d in 0.01f64..2.0, m in 1e-32f64..1e-28, s in 0.1f64..10.0) {
            let base = ground_state(d, m, HBAR_SI).unwrap().energy;
            let wider = ground_state(d * s, m, HBAR_SI).unwrap().energy;
            let heavier = ground_state(d, m * s, HBAR_SI).unwrap().energy;
            prop_assert!((wider * s * s / base - 1.0).abs() < 1e-12);
            prop_assert!((heavier * s / base - 1.0).abs() < 1e-12);
        }

        #[test]
        fn mass_saturates_uncertainty(dp in 1e-6f64..1.0, dpdt in 1e-6f64..1.0) {
            let m0 = estimate_stock_mass(dp, dpdt, HBAR_SI).unwrap();
            let product = uncertainty_product(dp, m0, dpdt);
            prop_assert!((product / (0.5 * HBAR_SI) - 1.0).abs() < 1e-14);
        }
    }
}
