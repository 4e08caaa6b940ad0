//! Quantum model of a single price-limited stock.
//!
//! The rate of return `r` of a stock whose daily move is capped at ±10% lives in
//! an infinite square well of width `d = 0.2`. The equilibrium distribution is
//! the well's cosine ground state; a periodic information field `eF·r·cos(ωt)`
//! drives the well, and the driven wave function is built from Floquet
//! sidebands with Bessel-function amplitudes. A Crank–Nicolson integrator of
//! the same Schrödinger equation serves as an independent oracle.
//!
//! Module map:
//!
//! * [`params`] — model parameters, numerical controls and market-side scales.
//! * [`specfun`] — integer-order Bessel functions of the first kind.
//! * [`statics`] — coordinate transforms, ground state, Gaussian reference, stock mass.
//! * [`floquet`] — the self-consistent driven spectrum (`k0`, `v`, `q`, `A_l`).
//! * [`wavefunction`] — evaluation of the driven wave function and its density.
//! * [`observables`] — interval probabilities, mean return and its time series.
//! * [`oracle`] — Crank–Nicolson integrator and power-series Bessel oracle.
//! * [`cli`] — the `qwell` command-line front end.

pub mod cli;
pub mod error;
pub mod floquet;
pub mod observables;
pub mod oracle;
pub mod par;
pub mod params;
pub mod quadrature;
pub mod specfun;
pub mod statics;
pub mod wavefunction;

pub use error::{Error, Result};
pub use floquet::{solve_spectrum, FloquetSpectrum};
pub use par::Execution;
pub use params::{resolve_config, MarketScale, ModelConfig};

pub use num_complex::Complex64;
