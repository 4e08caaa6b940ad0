//! Regression against values from an independent scipy implementation.

use qwell::observables::{mean_return, mean_return_series};
use qwell::wavefunction::density_profile;
use qwell::{solve_spectrum, ModelConfig};
use serde_json::Value;

fn golden() -> Value {
    serde_json::from_str(include_str!("golden/paper_parameters.json")).unwrap()
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs()
}

#[test]
fn spectrum_matches_reference() {
    let g = golden();
    let s = solve_spectrum(&ModelConfig::default()).unwrap();
    for (got, key) in [(s.k0, "k0"), (s.v, "v"), (s.q, "q")] {
        let want = g[key].as_f64().unwrap();
        assert!(close(got, want, 1e-12), "{key}: {got} vs {want}");
    }
    let tail = s
        .orders()
        .filter(|l| l.abs() > 30)
        .map(|l| s.amplitude(l).norm())
        .fold(0.0, f64::max);
    assert!(close(tail, g["max_tail_amplitude"].as_f64().unwrap(), 1e-9));
}

#[test]
fn profiles_match_reference() {
    let s = solve_spectrum(&ModelConfig::default()).unwrap();
    for p in golden()["profiles"].as_array().unwrap() {
        let t = p["t"].as_f64().unwrap();
        let profile = density_profile(&s, t, 2001).unwrap();
        assert_eq!(profile.argmax(), p["argmax"].as_f64().unwrap());
        assert!(
            close(profile.peak().1, p["peak"].as_f64().unwrap(), 1e-10),
            "t = {t}"
        );
        let mean = mean_return(&s, t, 2001).unwrap();
        assert!(
            close(mean, p["mean_return"].as_f64().unwrap(), 1e-8),
            "t = {t}: {mean}"
        );
    }
}

#[test]
fn series_amplitude_matches_reference() {
    let g = golden();
    let s = solve_spectrum(&ModelConfig::default()).unwrap();
    let series = mean_return_series(&s, g["series_samples"].as_u64().unwrap() as usize).unwrap();
    let want = g["series_amplitude"].as_f64().unwrap();
    assert!(
        close(series.amplitude, want, 1e-8),
        "{} vs {want}",
        series.amplitude
    );
}
