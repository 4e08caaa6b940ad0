//! Independent checks on the analytic machinery.
//!
//! * [`bessel_j_series`] sums the power series of `J_n` in double-double
//!   arithmetic, for comparison against the backward recurrence in
//!   [`crate::specfun`].
//! * [`cn_evolve`] integrates `iħ∂ψ/∂t = [-ħ²/(2m)∂²/∂r² + eFr·cos(ωt)]ψ`
//!   with Crank–Nicolson on a Dirichlet grid, and
//!   [`compare_analytic_numeric`] measures its distance to the sideband
//!   solution modulo a global phase.

mod crank_nicolson;
mod series;
mod tridiag;

pub use crank_nicolson::{
    cn_evolve, compare_analytic_numeric, phase_aligned_distance, GridState, OracleReport,
};
pub use series::{bessel_j_series, DEFAULT_SERIES_TERMS};
pub use tridiag::solve_tridiagonal;
