//! Sensitivity of the numerical results to their discretisation knobs.

use qwell::observables::mean_return_series;
use qwell::oracle::compare_analytic_numeric;
use qwell::{solve_spectrum, ModelConfig};

#[test]
fn oracle_error_is_insensitive_to_halving_dt() {
    let cfg = ModelConfig::default();
    let s = solve_spectrum(&cfg).unwrap();
    let coarse = compare_analytic_numeric(&s, 1000.0, &cfg).unwrap();
    let fine = compare_analytic_numeric(
        &s,
        1000.0,
        &ModelConfig {
            dt: 0.5 * cfg.dt,
            ..cfg
        },
    )
    .unwrap();
    let change = (fine.l2_rel / coarse.l2_rel - 1.0).abs();
    assert!(
        change < 0.1,
        "{} -> {} ({change:.3})",
        coarse.l2_rel,
        fine.l2_rel
    );
}

#[test]
fn series_statistics_are_stable_under_doubling_samples() {
    let s = solve_spectrum(&ModelConfig::default()).unwrap();
    let a = mean_return_series(&s, 2000).unwrap();
    let b = mean_return_series(&s, 4000).unwrap();
    assert!((a.amplitude - b.amplitude).abs() < 1e-3);
    assert!((a.symmetry_defect - b.symmetry_defect).abs() < 1e-3);
}

#[test]
fn grid_refinement_leaves_mean_return_unchanged() {
    let base = ModelConfig::default();
    let s = solve_spectrum(&base).unwrap();
    let fine = solve_spectrum(&ModelConfig {
        grid_n: 4001,
        ..base
    })
    .unwrap();
    let a = mean_return_series(&s, 256).unwrap();
    let b = mean_return_series(&fine, 256).unwrap();
    let worst = a
        .mean_r
        .iter()
        .zip(&b.mean_r)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst:e}");
}
