use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::tridiag::solve_in_place;
use crate::error::{Error, Result};
use crate::floquet::FloquetSpectrum;
use crate::params::ModelConfig;
use crate::wavefunction::DensityEvaluator;

/// Wave function sampled on a uniform Dirichlet grid over the well.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    pub t: f64,
    pub grid: Vec<f64>,
    /// `ψ(r_j)`; both endpoints are held at zero.
    pub values: Vec<Complex64>,
    pub dr: f64,
    pub dt: f64,
}

impl GridState {
    /// Samples `f` on `grid_n` points over the well; endpoints pinned to zero.
    /// The time step is taken from `config.dt`.
    pub fn from_fn(
        config: &ModelConfig,
        t: f64,
        grid_n: usize,
        f: impl Fn(f64) -> Complex64,
    ) -> Self {
        let grid = config.grid(grid_n);
        let values = grid.iter().map(|&r| f(r)).collect();
        Self::from_samples(config, t, grid, values)
    }

    pub fn from_samples(
        config: &ModelConfig,
        t: f64,
        grid: Vec<f64>,
        mut values: Vec<Complex64>,
    ) -> Self {
        assert_eq!(grid.len(), values.len());
        assert!(grid.len() >= 3, "need at least one interior point");
        let n = values.len();
        values[0] = Complex64::new(0.0, 0.0);
        values[n - 1] = Complex64::new(0.0, 0.0);
        GridState {
            t,
            dr: grid[1] - grid[0],
            grid,
            values,
            dt: config.dt,
        }
    }

    /// Discrete norm `Σ|ψ_j|²·dr`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dr
    }

    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Advances `initial` to `t_end` with Crank–Nicolson steps of `initial.dt`.
///
/// The drive `eF·r·cos(ωt)` is sampled at the midpoint of each step.
/// `t_end - initial.t` must be a whole number of steps up to rounding.
pub fn cn_evolve(initial: &GridState, t_end: f64, config: &ModelConfig) -> Result<GridState> {
    let span = t_end - initial.t;
    if !(span > 0.0) {
        return Err(Error::invalid(
            "t_end",
            format!("must exceed the start time {}", initial.t),
        ));
    }
    let dt = initial.dt;
    let steps = (span / dt).round();
    if steps < 1.0 || (steps * dt - span).abs() > 1e-9 * span {
        return Err(Error::invalid(
            "dt",
            format!("{dt} does not divide the interval {span}"),
        ));
    }
    let steps = steps as usize;

    let n = initial.values.len();
    let interior = n - 2;
    let hopping = config.hbar / (2.0 * config.m * initial.dr * initial.dr);
    let drive = config.e * config.field / config.hbar;
    let half = 0.5 * dt;
    let i = Complex64::i();

    let off = -i * half * hopping;
    let lower = vec![off; interior.saturating_sub(1)];
    let upper = lower.clone();
    let mut diag = vec![Complex64::new(0.0, 0.0); interior];
    let mut scratch = vec![Complex64::new(0.0, 0.0); interior];
    let mut rhs = vec![Complex64::new(0.0, 0.0); interior];

    let mut state = initial.clone();
    for step in 0..steps {
        let t_mid = initial.t + (step as f64 + 0.5) * dt;
        let tilt = drive * (config.omega * t_mid).cos();
        let psi = &state.values;
        for j in 0..interior {
            let onsite = 2.0 * hopping + tilt * state.grid[j + 1];
            diag[j] = Complex64::new(1.0, half * onsite);
            rhs[j] = Complex64::new(1.0, -half * onsite) * psi[j + 1]
                + i * half * hopping * (psi[j] + psi[j + 2]);
        }
        solve_in_place(&lower, &diag, &upper, &mut rhs, &mut scratch)?;
        if rhs.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Diverged { step, t: t_mid });
        }
        state.values[1..n - 1].copy_from_slice(&rhs);
    }
    state.t = t_end;
    Ok(state)
}

/// Relative L2 distance between `numeric` and `reference` after rotating
/// `numeric` by the global phase that maximises `|⟨reference, numeric⟩|`.
/// Returns `(l2_rel, phase)`.
pub fn phase_aligned_distance(numeric: &[Complex64], reference: &[Complex64]) -> (f64, f64) {
    assert_eq!(numeric.len(), reference.len());
    let overlap: Complex64 = reference
        .iter()
        .zip(numeric)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let phase = overlap.arg();
    let rot = Complex64::from_polar(1.0, -phase);
    let diff: f64 = numeric
        .iter()
        .zip(reference)
        .map(|(b, a)| (b * rot - a).norm_sqr())
        .sum();
    let scale: f64 = reference.iter().map(|a| a.norm_sqr()).sum();
    ((diff / scale).sqrt(), phase)
}

/// Outcome of an analytic-versus-numeric comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub t_end: f64,
    pub dt: f64,
    pub grid_n: usize,
    pub l2_rel: f64,
    pub phase: f64,
    pub norm_drift: f64,
}

/// Evolves the analytic state at `t = 0` to `t_end` with Crank–Nicolson and
/// compares with the analytic state at `t_end`.
///
/// Physics comes from `spectrum.config`; `config` supplies the grid size and
/// time step.
pub fn compare_analytic_numeric(
    spectrum: &FloquetSpectrum,
    t_end: f64,
    config: &ModelConfig,
) -> Result<OracleReport> {
    if !(t_end > 0.0) {
        return Err(Error::invalid("t_end", "must be positive"));
    }
    let physics = ModelConfig {
        grid_n: config.grid_n,
        dt: config.dt,
        ..spectrum.config
    };
    let evaluator = DensityEvaluator::new(spectrum, config.grid_n)?;
    let initial =
        GridState::from_samples(&physics, 0.0, evaluator.grid().to_vec(), evaluator.psi(0.0));
    let evolved = cn_evolve(&initial, t_end, &physics)?;
    let analytic = evaluator.psi(t_end);
    let (l2_rel, phase) = phase_aligned_distance(&evolved.values, &analytic);
    Ok(OracleReport {
        t_end,
        dt: physics.dt,
        grid_n: physics.grid_n,
        l2_rel,
        phase,
        norm_drift: (evolved.norm() / initial.norm() - 1.0).abs(),
    })
}
