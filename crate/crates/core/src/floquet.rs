//! Spectrum of the driven well.
//!
//! In the frame co-moving with the classical quiver `ξ = r - eF·cos(ωt)/(mω²)`
//! the wave function splits into sidebands with energies `E_c + lħω` and
//! wavevectors `k_l = k0·sqrt(1 + l·v)`. Imposing the wall condition to second
//! order in `v = ħω/E_c` fixes the sideband amplitudes `A_l` as a short
//! Bessel combination in `q = k0·eF/(mω²)`, and `k0` self-consistently through
//! `k0·d = π / sqrt(1 + q²v²/8)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::ModelConfig;
use crate::specfun::bessel_row;

/// Damping of the fixed-point update for `k0`.
pub const K0_DAMPING: f64 = 0.5;
pub const K0_MAX_ITERATIONS: usize = 10_000;
pub const K0_TOLERANCE: f64 = 1e-14;

/// Solved sideband structure of the driven well.
#[derive(Debug, Clone, PartialEq)]
pub struct FloquetSpectrum {
    pub k0: f64,
    /// Centric energy `ħ²k0²/(2m)`.
    pub ec: f64,
    pub v: f64,
    pub q: f64,
    /// Truncation order `L`.
    pub sidebands: usize,
    /// `k_l` for `l = -L..=L`.
    pub wavevectors: Vec<f64>,
    /// Non-normalised `A_l` for `l = -L..=L`.
    pub amplitudes: Vec<Complex64>,
    pub config: ModelConfig,
}

/// JSON form of a solved spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumExport {
    pub k0: f64,
    #[serde(rename = "Ec")]
    pub ec: f64,
    pub v: f64,
    pub q: f64,
    #[serde(rename = "L")]
    pub sidebands: usize,
    /// `[re, im]` pairs for `l = -L..=L`.
    #[serde(rename = "A")]
    pub amplitudes: Vec<[f64; 2]>,
}

impl FloquetSpectrum {
    pub fn orders(&self) -> impl Iterator<Item = i64> + Clone {
        let l = self.sidebands as i64;
        -l..=l
    }

    fn index(&self, l: i64) -> usize {
        let big_l = self.sidebands as i64;
        assert!(l.abs() <= big_l, "sideband {l} outside ±{big_l}");
        (l + big_l) as usize
    }

    pub fn wavevector(&self, l: i64) -> f64 {
        self.wavevectors[self.index(l)]
    }

    pub fn amplitude(&self, l: i64) -> Complex64 {
        self.amplitudes[self.index(l)]
    }

    /// `|k0·d - π/sqrt(1 + q²v²/8)|`.
    pub fn self_consistency_residual(&self) -> f64 {
        (self.k0 * self.config.d - PI / (1.0 + self.q * self.q * self.v * self.v / 8.0).sqrt())
            .abs()
    }

    /// `L >= ceil(q) + 10`.
    pub fn truncation_adequate(&self) -> bool {
        self.sidebands as f64 >= self.q.ceil() + 10.0
    }

    /// Drive period `2π/ω`.
    pub fn period(&self) -> f64 {
        self.config.period()
    }

    pub fn export(&self) -> SpectrumExport {
        SpectrumExport {
            k0: self.k0,
            ec: self.ec,
            v: self.v,
            q: self.q,
            sidebands: self.sidebands,
            amplitudes: self.amplitudes.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

/// `i^l` without rounding.
pub fn i_pow(l: i64) -> Complex64 {
    match l.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Second-order-in-`v` sideband amplitudes `A_l`, `l = -L..=L`.
pub fn sideband_amplitudes(q: f64, v: f64, sidebands: usize) -> Result<Vec<Complex64>> {
    let big_l = sidebands as i64;
    let j = bessel_row(q, -big_l - 4, big_l + 4)?;
    let (q2, v2) = (q * q, v * v);
    let c1 = q * (q2 - PI * PI) * v2 / 64.0;
    let c2 = 3.0 * q2 * v / 32.0;
    let c3 = q2 * v2 / 32.0;
    let c4 = q2 * q * v2 / 64.0;
    let c5 = 9.0 * q2 * q2 * v2 / 2048.0;
    Ok((-big_l..=big_l)
        .map(|l| {
            let bracket = j.get(l) + c1 * (j.get(l + 1) - j.get(l - 1))
                - c2 * (j.get(l + 2) - j.get(l - 2))
                - c3 * (j.get(l + 2) + j.get(l - 2))
                - c4 * (j.get(l + 3) - j.get(l - 3))
                + c5 * (j.get(l + 4) + j.get(l - 4));
            i_pow(l) * bracket
        })
        .collect())
}

struct DriveScales {
    /// `eF/(mω²)`; `q = k0·quiver`.
    quiver: f64,
    /// `ħ²/(2m)`; `E_c = kinetic·k0²`.
    kinetic: f64,
    photon: f64,
}

impl DriveScales {
    fn new(cfg: &ModelConfig) -> Self {
        DriveScales {
            quiver: cfg.quiver_amplitude(),
            kinetic: cfg.hbar * cfg.hbar / (2.0 * cfg.m),
            photon: cfg.hbar * cfg.omega,
        }
    }

    /// `(E_c, v, q)` at a given `k0`.
    fn at(&self, k0: f64) -> (f64, f64, f64) {
        let ec = self.kinetic * k0 * k0;
        (ec, self.photon / ec, k0 * self.quiver)
    }
}

fn solve_k0(cfg: &ModelConfig) -> Result<f64> {
    let scales = DriveScales::new(cfg);
    let target = |k0: f64| {
        let (_, v, q) = scales.at(k0);
        PI / (cfg.d * (1.0 + q * q * v * v / 8.0).sqrt())
    };
    let mut k0 = PI / cfg.d;
    let mut residual = f64::INFINITY;
    for _ in 0..K0_MAX_ITERATIONS {
        let next = target(k0);
        if !next.is_finite() {
            return Err(Error::NonFinite(format!("k0 iterate from {k0}")));
        }
        residual = (k0 - next).abs() * cfg.d;
        if residual < K0_TOLERANCE {
            return Ok(k0);
        }
        k0 = (1.0 - K0_DAMPING) * k0 + K0_DAMPING * next;
    }
    Err(Error::NoConvergence {
        iterations: K0_MAX_ITERATIONS,
        residual,
    })
}

/// Solves for `k0`, `E_c`, `v`, `q`, the sideband wavevectors and amplitudes.
pub fn solve_spectrum(config: &ModelConfig) -> Result<FloquetSpectrum> {
    let config = config.validated()?;
    let k0 = solve_k0(&config)?;
    let (ec, v, q) = DriveScales::new(&config).at(k0);
    let big_l = config.sidebands as i64;

    // Report the evanescent sideband nearest l = 0.
    for mag in 1..=big_l {
        for l in [-mag, mag] {
            let arg = 1.0 + l as f64 * v;
            if arg <= 0.0 {
                return Err(Error::EvanescentSideband { l, value: arg });
            }
        }
    }
    let wavevectors = (-big_l..=big_l)
        .map(|l| k0 * (1.0 + l as f64 * v).sqrt())
        .collect();
    let amplitudes = sideband_amplitudes(q, v, config.sidebands)?;

    let spectrum = FloquetSpectrum {
        k0,
        ec,
        v,
        q,
        sidebands: config.sidebands,
        wavevectors,
        amplitudes,
        config,
    };
    if !spectrum.truncation_adequate() {
        log::warn!(
            "truncation L = {} is below ceil(q) + 10 = {}",
            spectrum.sidebands,
            spectrum.q.ceil() + 10.0
        );
    }
    Ok(spectrum)
}

/// `max(|ψ(±d/2, t)|) / max_r |ψ(r, t)|` on the config's grid.
pub fn boundary_residual(spectrum: &FloquetSpectrum, t: f64) -> Result<f64> {
    let evaluator = crate::wavefunction::DensityEvaluator::new(spectrum, spectrum.config.grid_n)?;
    let psi = evaluator.psi(t);
    let peak = psi.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let wall = psi[0].norm().max(psi[psi.len() - 1].norm());
    Ok(wall / peak)
}
