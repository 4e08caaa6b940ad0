//! Model parameters.
//!
//! All physical quantities are dimensionless magnitudes: after the move from
//! price to rate of return the currency unit drops out, and the "mass" of a
//! stock is used as a pure number.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

/// CODATA 2018 reduced Planck constant in J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;

/// Price-limit band as a fraction of the previous close (±10%).
pub const PRICE_LIMIT_WIDTH: f64 = 0.2;

pub const DEFAULT_D: f64 = 0.2;
pub const DEFAULT_MASS: f64 = 1e-30;
pub const DEFAULT_COUPLING: f64 = 1e-19;
pub const DEFAULT_FIELD: f64 = 1e-19;
pub const DEFAULT_OMEGA: f64 = 1e-4;
pub const DEFAULT_SIDEBANDS: usize = 40;
pub const DEFAULT_GRID_N: usize = 2001;
pub const DEFAULT_DT: f64 = 0.05;
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-2;
pub const DEFAULT_NORM_TOL: f64 = 1e-2;

/// Physical parameters of the driven well plus the numerical controls used by
/// the solvers. Construct through [`resolve_config`] or [`ModelConfig::validated`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Well width in return units.
    pub d: f64,
    /// Stock mass.
    pub m: f64,
    pub hbar: f64,
    /// Coupling constant of the information field.
    pub e: f64,
    /// Field amplitude.
    #[serde(rename = "F")]
    pub field: f64,
    /// Angular frequency of the information cycle, 1/s.
    pub omega: f64,
    /// Sideband truncation order: `l` runs over `-L..=L`.
    #[serde(rename = "L")]
    pub sidebands: usize,
    pub grid_n: usize,
    /// Oracle time step in seconds.
    pub dt: f64,
    pub boundary_tol: f64,
    pub norm_tol: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            d: DEFAULT_D,
            m: DEFAULT_MASS,
            hbar: HBAR_SI,
            e: DEFAULT_COUPLING,
            field: DEFAULT_FIELD,
            omega: DEFAULT_OMEGA,
            sidebands: DEFAULT_SIDEBANDS,
            grid_n: DEFAULT_GRID_N,
            dt: DEFAULT_DT,
            boundary_tol: DEFAULT_BOUNDARY_TOL,
            norm_tol: DEFAULT_NORM_TOL,
        }
    }
}

impl ModelConfig {
    /// Checks every field invariant and returns the config unchanged.
    pub fn validated(self) -> Result<Self> {
        fn positive(field: &str, x: f64) -> Result<()> {
            if !x.is_finite() {
                return Err(Error::invalid(field, "must be finite"));
            }
            if x <= 0.0 {
                return Err(Error::invalid(field, "must be positive"));
            }
            Ok(())
        }
        fn non_negative(field: &str, x: f64) -> Result<()> {
            if !x.is_finite() {
                return Err(Error::invalid(field, "must be finite"));
            }
            if x < 0.0 {
                return Err(Error::invalid(field, "must be non-negative"));
            }
            Ok(())
        }

        positive("d", self.d)?;
        positive("m", self.m)?;
        positive("hbar", self.hbar)?;
        non_negative("e", self.e)?;
        non_negative("F", self.field)?;
        positive("omega", self.omega)?;
        if self.sidebands < 1 {
            return Err(Error::invalid("L", "must be at least 1"));
        }
        if self.grid_n < 3 {
            return Err(Error::invalid("grid_n", "must be at least 3"));
        }
        if self.grid_n % 2 == 0 {
            return Err(Error::invalid("grid_n", "must be odd"));
        }
        positive("dt", self.dt)?;
        positive("boundary_tol", self.boundary_tol)?;
        positive("norm_tol", self.norm_tol)?;
        Ok(self)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.d
    }

    /// Drive period `τ = 2π/ω`.
    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    /// Classical quiver amplitude `eF/(mω²)` of the Kramers–Henneberger shift.
    pub fn quiver_amplitude(&self) -> f64 {
        self.e * self.field / (self.m * self.omega * self.omega)
    }

    /// Uniform grid of `n` points over `[-d/2, d/2]` with exact endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        uniform_grid(-self.half_width(), self.half_width(), n)
    }
}

/// `n` equally spaced points from `a` to `b`, both endpoints exact.
///
/// The upper half is laid out from `b` downwards, so a symmetric interval
/// gives a grid with `x[n-1-i] == -x[i]` bit for bit.
pub fn uniform_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two points");
    let h = (b - a) / (n - 1) as f64;
    let mut grid: Vec<f64> = (0..n)
        .map(|i| {
            if 2 * i < n - 1 {
                a + i as f64 * h
            } else {
                b - (n - 1 - i) as f64 * h
            }
        })
        .collect();
    if n % 2 == 1 {
        grid[n / 2] = 0.5 * (a + b);
    }
    grid
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    d: Option<f64>,
    m: Option<f64>,
    hbar: Option<f64>,
    e: Option<f64>,
    #[serde(rename = "F")]
    field: Option<f64>,
    omega: Option<f64>,
    #[serde(rename = "L")]
    sidebands: Option<i64>,
    grid_n: Option<i64>,
    dt: Option<f64>,
    boundary_tol: Option<f64>,
    norm_tol: Option<f64>,
}

fn to_count(field: &str, value: Option<i64>, default: usize) -> Result<usize> {
    match value {
        None => Ok(default),
        Some(v) if v < 0 => Err(Error::invalid(field, "must be non-negative")),
        Some(v) => Ok(v as usize),
    }
}

/// Resolves a flat key-value document into a validated [`ModelConfig`].
///
/// Missing physical parameters take the reference values (`d = 0.2`,
/// `m = 1e-30`, `e = F = 1e-19`, `ω = 1e-4`); missing numerical controls take
/// `L = 40`, `grid_n = 2001`, `dt = 0.05`, `boundary_tol = norm_tol = 1e-2`.
pub fn resolve_config(raw: &Map<String, Value>) -> Result<ModelConfig> {
    let raw: RawConfig = serde_json::from_value(Value::Object(raw.clone()))
        .map_err(|err| Error::invalid("config", err.to_string()))?;
    let defaults = ModelConfig::default();
    ModelConfig {
        d: raw.d.unwrap_or(defaults.d),
        m: raw.m.unwrap_or(defaults.m),
        hbar: raw.hbar.unwrap_or(defaults.hbar),
        e: raw.e.unwrap_or(defaults.e),
        field: raw.field.unwrap_or(defaults.field),
        omega: raw.omega.unwrap_or(defaults.omega),
        sidebands: to_count("L", raw.sidebands, defaults.sidebands)?,
        grid_n: to_count("grid_n", raw.grid_n, defaults.grid_n)?,
        dt: raw.dt.unwrap_or(defaults.dt),
        boundary_tol: raw.boundary_tol.unwrap_or(defaults.boundary_tol),
        norm_tol: raw.norm_tol.unwrap_or(defaults.norm_tol),
    }
    .validated()
}

/// Price-side scales of a stock under the ±10% limit rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketScale {
    /// Previous closing price, Yuan.
    pub p0: f64,
    /// Width of the price well, Yuan.
    pub d0: f64,
    /// Standard deviation of the price, Yuan.
    pub dp: f64,
    /// Standard deviation of the price-change rate, Yuan/s.
    pub dpdt: f64,
    /// Stock mass from the minimum-uncertainty relation.
    pub m0: f64,
}

impl MarketScale {
    pub fn new(p0: f64, dp: f64, dpdt: f64, hbar: f64) -> Result<Self> {
        for (field, x) in [("p0", p0), ("dp", dp), ("dpdt", dpdt), ("hbar", hbar)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::invalid(field, "must be positive"));
            }
        }
        Ok(MarketScale {
            p0,
            d0: p0 * PRICE_LIMIT_WIDTH,
            dp,
            dpdt,
            m0: crate::statics::estimate_stock_mass(dp, dpdt, hbar)?,
        })
    }

    /// Mass in return coordinates: `r = ℘'/℘0` rescales `Δ℘` by `1/℘0`, so
    /// the uncertainty product picks up a factor `1/℘0²`.
    pub fn return_mass(&self) -> f64 {
        self.m0 / (self.p0 * self.p0)
    }
}
