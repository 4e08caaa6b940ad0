//! Driven-well wave function and its probability density.
//!
//! `ψ(r, t) = χ(r, t)·φ(ξ, t)` with the quiver coordinate
//! `ξ = r - eF·cos(ωt)/(mω²)`, the pure phase
//! `χ = exp[-iE_c t/ħ - ieFr·sin(ωt)/(ħω) - ie²F²(2ωt - sin 2ωt)/(8ħmω³)]`
//! and the sideband sum
//! `φ = Σ_l A_l e^{-ilωt} [e^{ik_l ξ} + (-1)^l e^{-ik_l ξ}]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::floquet::FloquetSpectrum;
use crate::par::Execution;
use crate::params::uniform_grid;
use crate::quadrature::simpson;

/// Relative slack on `|r| <= d/2` for points that land on a wall by rounding.
const WALL_SLACK: f64 = 1e-12;

/// The factors of `ψ = χ·φ` at one `(r, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnsatzParts {
    pub xi: f64,
    pub chi: Complex64,
    pub phi: Complex64,
}

impl AnsatzParts {
    pub fn psi(&self) -> Complex64 {
        self.chi * self.phi
    }
}

/// Normalised `|ψ|²` on a uniform grid over the well at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    pub t: f64,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
    /// `∫|ψ|² dr` before normalisation.
    pub raw_norm: f64,
}

impl DensityProfile {
    pub fn spacing(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    /// Index and value of the largest density sample (first on ties).
    pub fn peak(&self) -> (usize, f64) {
        self.density
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
                if v > best.1 {
                    (i, v)
                } else {
                    best
                }
            })
    }

    pub fn argmax(&self) -> f64 {
        self.grid[self.peak().0]
    }
}

fn check_inside(spectrum: &FloquetSpectrum, r: f64) -> Result<()> {
    let half = spectrum.config.half_width();
    if r.is_finite() && r.abs() <= half * (1.0 + WALL_SLACK) {
        Ok(())
    } else {
        Err(Error::OutsideWell {
            r,
            half_width: half,
        })
    }
}

/// Quiver coordinate `ξ = r - eF·cos(ωt)/(mω²)`.
pub fn quiver_coordinate(spectrum: &FloquetSpectrum, r: f64, t: f64) -> f64 {
    let cfg = &spectrum.config;
    r - cfg.quiver_amplitude() * (cfg.omega * t).cos()
}

/// Phase of `χ(r, t)`.
pub fn chi_phase(spectrum: &FloquetSpectrum, r: f64, t: f64) -> f64 {
    let cfg = &spectrum.config;
    let (hbar, w) = (cfg.hbar, cfg.omega);
    let ef = cfg.e * cfg.field;
    let wt = w * t;
    -spectrum.ec * t / hbar
        - ef * r * wt.sin() / (hbar * w)
        - ef * ef * (2.0 * wt - (2.0 * wt).sin()) / (8.0 * hbar * cfg.m * w * w * w)
}

/// The factorisation `ψ = χ·φ` evaluated directly from the sideband sum.
pub fn ansatz_parts(spectrum: &FloquetSpectrum, r: f64, t: f64) -> Result<AnsatzParts> {
    check_inside(spectrum, r)?;
    let xi = quiver_coordinate(spectrum, r, t);
    let chi = Complex64::from_polar(1.0, chi_phase(spectrum, r, t));
    let wt = spectrum.config.omega * t;
    let phi = spectrum
        .orders()
        .map(|l| {
            let k = spectrum.wavevector(l);
            let forward = Complex64::from_polar(1.0, k * xi);
            let backward = forward.conj();
            let parity = if l % 2 == 0 { 1.0 } else { -1.0 };
            spectrum.amplitude(l)
                * Complex64::from_polar(1.0, -(l as f64) * wt)
                * (forward + backward * parity)
        })
        .sum();
    Ok(AnsatzParts { xi, chi, phi })
}

/// `ψ(r, t)`; `|r|` must not exceed `d/2`.
pub fn psi_at(spectrum: &FloquetSpectrum, r: f64, t: f64) -> Result<Complex64> {
    ansatz_parts(spectrum, r, t).map(|p| p.psi())
}

/// Evaluates `ψ` on a fixed uniform grid at many times.
///
/// The spatial factors `e^{ik_l r_j}` are tabulated once; each time instant
/// then costs two complex multiply-adds per sideband and grid point.
#[derive(Debug, Clone)]
pub struct DensityEvaluator<'a> {
    spectrum: &'a FloquetSpectrum,
    grid: Vec<f64>,
    /// Row-major `[point][sideband]` table of `e^{ik_l r_j}`.
    plane_waves: Vec<Complex64>,
    execution: Execution,
}

impl<'a> DensityEvaluator<'a> {
    /// Uniform `grid_n`-point grid over the whole well.
    pub fn new(spectrum: &'a FloquetSpectrum, grid_n: usize) -> Result<Self> {
        if grid_n < 3 || grid_n % 2 == 0 {
            return Err(Error::invalid("grid_n", "must be odd and at least 3"));
        }
        let grid = spectrum.config.grid(grid_n);
        Self::on_grid(spectrum, grid)
    }

    /// Arbitrary uniform grid inside the well.
    pub fn on_grid(spectrum: &'a FloquetSpectrum, grid: Vec<f64>) -> Result<Self> {
        for &r in &grid {
            check_inside(spectrum, r)?;
        }
        let plane_waves = grid
            .iter()
            .flat_map(|&r| {
                spectrum
                    .wavevectors
                    .iter()
                    .map(move |&k| Complex64::from_polar(1.0, k * r))
            })
            .collect();
        Ok(DensityEvaluator {
            spectrum,
            grid,
            plane_waves,
            execution: Execution::default(),
        })
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn spectrum(&self) -> &FloquetSpectrum {
        self.spectrum
    }

    /// Per-sideband coefficients of `e^{+ik_l r}` and `e^{-ik_l r}` at time `t`.
    fn coefficients(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let s = self.spectrum;
        let cfg = &s.config;
        let shift = cfg.quiver_amplitude() * (cfg.omega * t).cos();
        let wt = cfg.omega * t;
        s.orders()
            .zip(s.wavevectors.iter().zip(&s.amplitudes))
            .map(|(l, (&k, &a))| {
                let c = a * Complex64::from_polar(1.0, -(l as f64) * wt);
                let parity = if l % 2 == 0 { 1.0 } else { -1.0 };
                (
                    c * Complex64::from_polar(1.0, -k * shift),
                    c * Complex64::from_polar(parity, k * shift),
                )
            })
            .unzip()
    }

    fn psi_point(&self, j: usize, t: f64, fwd: &[Complex64], bwd: &[Complex64]) -> Complex64 {
        let width = fwd.len();
        let row = &self.plane_waves[j * width..(j + 1) * width];
        let mut phi = Complex64::new(0.0, 0.0);
        for ((e, f), b) in row.iter().zip(fwd).zip(bwd) {
            phi += f * e + b * e.conj();
        }
        Complex64::from_polar(1.0, chi_phase(self.spectrum, self.grid[j], t)) * phi
    }

    pub fn psi(&self, t: f64) -> Vec<Complex64> {
        self.psi_with(t, self.execution)
    }

    pub fn psi_with(&self, t: f64, execution: Execution) -> Vec<Complex64> {
        let (fwd, bwd) = self.coefficients(t);
        execution.map_range(self.grid.len(), |j| self.psi_point(j, t, &fwd, &bwd))
    }

    pub fn profile(&self, t: f64) -> DensityProfile {
        self.profile_with(t, self.execution)
    }

    pub fn profile_with(&self, t: f64, execution: Execution) -> DensityProfile {
        let mut density: Vec<f64> = self
            .psi_with(t, execution)
            .iter()
            .map(|z| z.norm_sqr())
            .collect();
        let raw_norm = simpson(&density, self.grid[1] - self.grid[0]);
        for v in &mut density {
            *v /= raw_norm;
        }
        DensityProfile {
            t,
            grid: self.grid.clone(),
            density,
            raw_norm,
        }
    }
}

/// Normalised density on a uniform `grid_n`-point grid over the well.
pub fn density_profile(
    spectrum: &FloquetSpectrum,
    t: f64,
    grid_n: usize,
) -> Result<DensityProfile> {
    Ok(DensityEvaluator::new(spectrum, grid_n)?.profile(t))
}

/// Unnormalised `|ψ|²` at time `t` on `n` uniform points over `[a, b]`,
/// together with the grid spacing.
pub(crate) fn raw_density_on(
    spectrum: &FloquetSpectrum,
    a: f64,
    b: f64,
    n: usize,
    t: f64,
) -> Result<(Vec<f64>, f64)> {
    let grid = uniform_grid(a, b, n);
    let h = grid[1] - grid[0];
    let evaluator = DensityEvaluator::on_grid(spectrum, grid)?;
    Ok((evaluator.psi(t).iter().map(|z| z.norm_sqr()).collect(), h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floquet::solve_spectrum;
    use crate::params::ModelConfig;
    use proptest::prelude::*;
    use std::f64::consts::PI;
    use std::sync::OnceLock;

    fn paper() -> &'static FloquetSpectrum {
        static S: OnceLock<FloquetSpectrum> = OnceLock::new();
        S.get_or_init(|| solve_spectrum(&ModelConfig::default()).unwrap())
    }

    fn undriven() -> FloquetSpectrum {
        solve_spectrum(&ModelConfig {
            field: 0.0,
            ..ModelConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn undriven_psi_is_cosine() {
        let s = undriven();
        let centre = psi_at(&s, 0.0, 0.0).unwrap();
        assert!((centre - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        for i in 0..=20 {
            let r = -0.1 + 0.01 * i as f64;
            let ratio = psi_at(&s, r, 0.0).unwrap().norm() / centre.norm();
            assert!(
                (ratio - (PI * r / 0.2).cos().abs()).abs() < 1e-12,
                "r = {r}"
            );
        }
    }

    #[test]
    fn outside_well_is_an_error() {
        let s = paper();
        assert!(matches!(
            psi_at(s, 0.1000001, 0.0),
            Err(Error::OutsideWell { .. })
        ));
        assert!(psi_at(s, -0.1, 0.0).is_ok());
    }

    #[test]
    fn undriven_density_is_cos_squared() {
        let s = undriven();
        for t in [0.0, 1000.0, 25_000.0] {
            let p = density_profile(&s, t, 2001).unwrap();
            for (r, d) in p.grid.iter().zip(&p.density) {
                let want = 2.0 / 0.2 * (PI * r / 0.2).cos().powi(2);
                assert!((d - want).abs() < 1e-10, "t={t} r={r}");
            }
        }
    }

    #[test]
    fn table_path_matches_direct_sum() {
        let s = paper();
        let ev = DensityEvaluator::new(s, 101).unwrap();
        for t in [0.0, 1000.0, 25_000.0, 47_123.0] {
            let table = ev.psi(t);
            for (j, &r) in ev.grid().iter().enumerate() {
                let direct = psi_at(s, r, t).unwrap();
                assert!((table[j] - direct).norm() < 1e-11, "t={t} r={r}");
            }
        }
    }

    #[test]
    fn density_is_normalised_and_non_negative() {
        let p = density_profile(paper(), 1000.0, 2001).unwrap();
        assert!(p.density.iter().all(|&d| d >= 0.0));
        assert!((simpson(&p.density, p.spacing()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn initial_density_peaks_at_centre() {
        let p = density_profile(paper(), 0.0, 2001).unwrap();
        assert!(p.argmax().abs() <= p.spacing());
        let (i, _) = p.peak();
        assert!(p.density[0] < p.density[i] && p.density[2000] < p.density[i]);
    }

    #[test]
    fn raw_norm_drift_over_period() {
        let s = paper();
        let ev = DensityEvaluator::new(s, 2001).unwrap();
        let n0 = ev.profile(0.0).raw_norm;
        for j in 1..=32 {
            let t = s.period() * j as f64 / 32.0;
            let drift = (ev.profile(t).raw_norm / n0 - 1.0).abs();
            assert!(drift < 1e-2, "t={t}: drift {drift}");
        }
    }

    #[test]
    fn grid_refinement_converges() {
        let s = paper();
        let coarse = density_profile(s, 1000.0, 2001).unwrap();
        let fine = density_profile(s, 1000.0, 4001).unwrap();
        let worst = coarse
            .density
            .iter()
            .enumerate()
            .map(|(i, d)| (d - fine.density[2 * i]).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn execution_modes_agree_bitwise() {
        let ev = DensityEvaluator::new(paper(), 501).unwrap();
        assert_eq!(
            ev.profile_with(777.0, Execution::Sequential),
            ev.profile_with(777.0, Execution::Parallel)
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn factorisation(r in -0.1f64..0.1, t in 0.0f64..1e5) {
            let parts = ansatz_parts(paper(), r, t).unwrap();
            prop_assert!((parts.chi.norm() - 1.0).abs() < 1e-14);
            let psi = psi_at(paper(), r, t).unwrap();
            prop_assert!((parts.chi * parts.phi - psi).norm() < 1e-12);
        }

        #[test]
        fn density_is_periodic(r in -0.09f64..0.09, t in 0.0f64..7e4) {
            let s = paper();
            let tau = s.period();
            let a = psi_at(s, r, t).unwrap().norm_sqr();
            let b = psi_at(s, r, t + tau).unwrap().norm_sqr();
            prop_assert!((a - b).abs() <= 1e-10 * a.max(b), "{} vs {}", a, b);
        }
    }
}
