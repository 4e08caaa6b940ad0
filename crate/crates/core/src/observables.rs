//! Quadrature-based observables of the driven well.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::FloquetSpectrum;
use crate::par::Execution;
use crate::quadrature::simpson;
use crate::wavefunction::{
    density_profile, psi_at, raw_density_on, DensityEvaluator, DensityProfile,
};

/// Smallest number of time samples accepted by [`mean_return_series`].
pub const MIN_SERIES_SAMPLES: usize = 256;
pub const DEFAULT_SERIES_SAMPLES: usize = 2000;
/// Maxima of `⟨r(t)⟩` less prominent than this are treated as quadrature ripple.
pub const PROMINENCE_FLOOR: f64 = 1e-4;

/// `⟨r(t)⟩` over one drive period with fidelity diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    pub times: Vec<f64>,
    pub mean_r: Vec<f64>,
    pub raw_norms: Vec<f64>,
    /// `max_t |⟨r(t)⟩|`.
    pub amplitude: f64,
    /// Strict local maxima above [`PROMINENCE_FLOOR`].
    pub oscillations: usize,
    /// `max_s |⟨r(τ/2 + s)⟩ - ⟨r(τ/2 - s)⟩|`.
    pub symmetry_defect: f64,
}

impl ReturnSeries {
    /// `max_t |raw_norm(t)/raw_norm(0) - 1|`.
    pub fn norm_drift(&self) -> f64 {
        let first = self.raw_norms[0];
        self.raw_norms
            .iter()
            .map(|n| (n / first - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Summary statistics of a series, as written to the run manifest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesSummary {
    pub amplitude: f64,
    pub oscillations: usize,
    pub symmetry_defect: f64,
    pub norm_drift: f64,
}

impl From<&ReturnSeries> for SeriesSummary {
    fn from(s: &ReturnSeries) -> Self {
        SeriesSummary {
            amplitude: s.amplitude,
            oscillations: s.oscillations,
            symmetry_defect: s.symmetry_defect,
            norm_drift: s.norm_drift(),
        }
    }
}

/// `∫ r·ρ(r) dr` for a normalised profile.
pub fn profile_mean(profile: &DensityProfile) -> f64 {
    let integrand: Vec<f64> = profile
        .grid
        .iter()
        .zip(&profile.density)
        .map(|(r, d)| r * d)
        .collect();
    simpson(&integrand, profile.spacing())
}

/// Average rate of return `⟨r(t)⟩` from the normalised density.
pub fn mean_return(spectrum: &FloquetSpectrum, t: f64, grid_n: usize) -> Result<f64> {
    Ok(profile_mean(&density_profile(spectrum, t, grid_n)?))
}

/// `⟨r(t)⟩ = (1/C)∫ψ*·r·ψ dr` with `C = ∫ψ*ψ dr`, evaluating `ψ` pointwise.
///
/// Independent of the tabulated path used by [`mean_return`].
pub fn mean_return_direct(spectrum: &FloquetSpectrum, t: f64, grid_n: usize) -> Result<f64> {
    let grid = spectrum.config.grid(grid_n);
    let h = grid[1] - grid[0];
    let mut weighted = Vec::with_capacity(grid_n);
    let mut plain = Vec::with_capacity(grid_n);
    for &r in &grid {
        let psi = psi_at(spectrum, r, t)?;
        weighted.push(psi.conj() * r * psi);
        plain.push(psi.conj() * psi);
    }
    let num: Complex64 = simpson(&weighted, h);
    let c: Complex64 = simpson(&plain, h);
    Ok(num.re / c.re)
}

/// Probability that the return lies in `[a, b]` at time `t`.
pub fn probability_in_range(spectrum: &FloquetSpectrum, a: f64, b: f64, t: f64) -> Result<f64> {
    let half = spectrum.config.half_width();
    let slack = 1e-12 * half;
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::InvalidInterval {
            a,
            b,
            reason: "need a < b".into(),
        });
    }
    if a < -half - slack || b > half + slack {
        return Err(Error::InvalidInterval {
            a,
            b,
            reason: format!("outside the well [-{half}, {half}]"),
        });
    }
    let n = spectrum.config.grid_n;
    let raw_norm = density_profile(spectrum, t, n)?.raw_norm;
    let (sub, h) = raw_density_on(spectrum, a.max(-half), b.min(half), n, t)?;
    Ok((simpson(&sub, h) / raw_norm).clamp(0.0, 1.0))
}

/// Topographic prominence of the peak at `i`: its height above the higher of
/// the two lowest points reached before meeting a higher sample (or the end).
fn prominence(values: &[f64], i: usize) -> f64 {
    let peak = values[i];
    let mut left_min = peak;
    for &v in values[..i].iter().rev() {
        if v > peak {
            break;
        }
        left_min = left_min.min(v);
    }
    let mut right_min = peak;
    for &v in &values[i + 1..] {
        if v > peak {
            break;
        }
        right_min = right_min.min(v);
    }
    peak - left_min.max(right_min)
}

/// Number of strict interior local maxima with prominence at least `floor`.
pub fn count_oscillations(values: &[f64], floor: f64) -> usize {
    if values.len() < 3 {
        return 0;
    }
    (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .filter(|&i| prominence(values, i) >= floor)
        .count()
}

/// `max_s |x(τ/2 + s) - x(τ/2 - s)|` for samples symmetric about the middle.
pub fn symmetry_defect(values: &[f64]) -> f64 {
    let n = values.len();
    (0..n / 2)
        .map(|i| (values[i] - values[n - 1 - i]).abs())
        .fold(0.0, f64::max)
}

/// Uniform sample times `t_i = i·τ/(samples - 1)` covering `[0, τ]`.
pub fn period_times(period: f64, samples: usize) -> Vec<f64> {
    let mut times: Vec<f64> = (0..samples)
        .map(|i| period * i as f64 / (samples - 1) as f64)
        .collect();
    times[samples - 1] = period;
    times
}

pub fn mean_return_series(spectrum: &FloquetSpectrum, samples: usize) -> Result<ReturnSeries> {
    mean_return_series_with(spectrum, samples, Execution::default())
}

/// [`mean_return_series`] with explicit control over parallelism; the
/// output is identical in both modes.
pub fn mean_return_series_with(
    spectrum: &FloquetSpectrum,
    samples: usize,
    execution: Execution,
) -> Result<ReturnSeries> {
    if samples < MIN_SERIES_SAMPLES {
        return Err(Error::invalid(
            "samples",
            format!("must be at least {MIN_SERIES_SAMPLES}"),
        ));
    }
    let evaluator = DensityEvaluator::new(spectrum, spectrum.config.grid_n)?;
    let times = period_times(spectrum.period(), samples);
    let points: Vec<(f64, f64)> = execution.map_range(samples, |i| {
        let profile = evaluator.profile_with(times[i], Execution::Sequential);
        (profile_mean(&profile), profile.raw_norm)
    });
    let (mean_r, raw_norms): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let amplitude = mean_r.iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(ReturnSeries {
        oscillations: count_oscillations(&mean_r, PROMINENCE_FLOOR),
        symmetry_defect: symmetry_defect(&mean_r),
        amplitude,
        times,
        mean_r,
        raw_norms,
    })
}
