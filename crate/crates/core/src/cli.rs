//! The `qwell` command line.
//!
//! Every run writes its datasets plus a `manifest.json` into one output
//! directory: `--out` if given, otherwise `$QWELL_OUT/<timestamp>` or
//! `./out/<timestamp>`. Floats are written with 17 significant digits so
//! identical inputs give byte-identical CSV.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Error;
use crate::floquet::{boundary_residual, solve_spectrum, FloquetSpectrum};
use crate::observables::{mean_return_series, profile_mean, SeriesSummary, DEFAULT_SERIES_SAMPLES};
use crate::oracle::{compare_analytic_numeric, OracleReport};
use crate::params::{resolve_config, MarketScale, ModelConfig};
use crate::statics::{
    estimate_stock_mass, gaussian_reference, ground_state, DEFAULT_GAUSSIAN_SIGMA,
};
use crate::wavefunction::DensityEvaluator;

pub const GROUND_STATE_HEADER: &str = "r,cos2_density,gauss_density";
pub const DENSITY_HEADER: &str = "t,r,density";
pub const SERIES_HEADER: &str = "t,mean_return,raw_norm";
pub const OUT_ENV: &str = "QWELL_OUT";

/// Oracle acceptance bounds applied by `oracle-check --strict`.
pub const ORACLE_L2_TOL: f64 = 1e-2;
pub const ORACLE_NORM_DRIFT_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(
    name = "qwell",
    version,
    about = "Driven infinite-well model of a price-limited stock"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Flags shared by every command. Physical and numerical flags override the
/// matching field of the `--config` document.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Flat JSON object with model parameters.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub hbar: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub e: Option<f64>,
    #[arg(long = "F", global = true, allow_negative_numbers = true)]
    pub field: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    #[arg(long = "L", global = true, allow_negative_numbers = true)]
    pub sidebands: Option<i64>,
    #[arg(long = "grid_n", global = true, allow_negative_numbers = true)]
    pub grid_n: Option<i64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    #[arg(long = "boundary_tol", global = true)]
    pub boundary_tol: Option<f64>,
    #[arg(long = "norm_tol", global = true)]
    pub norm_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Equilibrium cos² density with a Gaussian reference curve.
    GroundState {
        #[arg(long, default_value_t = DEFAULT_GAUSSIAN_SIGMA)]
        sigma: f64,
    },
    /// Solve and export the sideband spectrum.
    Spectrum,
    /// Density snapshots of the driven well.
    Density {
        #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1000.0, 25000.0])]
        times: Vec<f64>,
    },
    /// Average rate of return over one drive period.
    Series {
        #[arg(long, default_value_t = DEFAULT_SERIES_SAMPLES)]
        samples: usize,
    },
    /// Compare the analytic solution against Crank–Nicolson.
    OracleCheck {
        #[arg(long = "t-end", default_value_t = 1000.0)]
        t_end: f64,
        /// Exit with status 1 when the comparison misses its bounds.
        #[arg(long)]
        strict: bool,
    },
    /// Stock mass from the minimum-uncertainty relation.
    EstimateMass {
        /// Standard deviation of the price.
        #[arg(long)]
        dp: f64,
        /// Standard deviation of the price-change rate.
        #[arg(long)]
        dpdt: f64,
        /// Previous closing price; adds price-side scales to the manifest.
        #[arg(long)]
        p0: Option<f64>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GroundState { .. } => "ground-state",
            Command::Spectrum => "spectrum",
            Command::Density { .. } => "density",
            Command::Series { .. } => "series",
            Command::OracleCheck { .. } => "oracle-check",
            Command::EstimateMass { .. } => "estimate-mass",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(Error),
    #[error(transparent)]
    Run(#[from] Error),
    #[error("strict check failed: {0}")]
    Strict(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Run(_) | CliError::Strict(_) => 1,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Run(e.into())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub k0: f64,
    #[serde(rename = "Ec")]
    pub ec: f64,
    pub v: f64,
    pub q: f64,
    #[serde(rename = "L")]
    pub sidebands: usize,
}

impl From<&FloquetSpectrum> for SpectrumSummary {
    fn from(s: &FloquetSpectrum) -> Self {
        SpectrumSummary {
            k0: s.k0,
            ec: s.ec,
            v: s.v,
            q: s.q,
            sidebands: s.sidebands,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: ModelConfig,
    pub spectrum: Option<SpectrumSummary>,
    /// Output file names relative to the output directory.
    pub outputs: Vec<String>,
    pub summary: Value,
    pub duration_seconds: f64,
}

/// Result of a successful command.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub out_dir: PathBuf,
    pub manifest: RunManifest,
}

/// Fixed-width scientific formatting with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn load_document(common: &CommonArgs) -> Result<Map<String, Value>, CliError> {
    let mut doc = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                CliError::Config(Error::invalid("config", format!("{}: {e}", path.display())))
            })?;
            match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(map)) => map,
                Ok(_) => {
                    return Err(CliError::Config(Error::invalid(
                        "config",
                        "must be a JSON object",
                    )))
                }
                Err(e) => return Err(CliError::Config(Error::invalid("config", e.to_string()))),
            }
        }
        None => Map::new(),
    };
    let floats = [
        ("d", common.d),
        ("m", common.m),
        ("hbar", common.hbar),
        ("e", common.e),
        ("F", common.field),
        ("omega", common.omega),
        ("dt", common.dt),
        ("boundary_tol", common.boundary_tol),
        ("norm_tol", common.norm_tol),
    ];
    for (key, value) in floats {
        if let Some(v) = value {
            doc.insert(key.into(), json!(v));
        }
    }
    for (key, value) in [("L", common.sidebands), ("grid_n", common.grid_n)] {
        if let Some(v) = value {
            doc.insert(key.into(), json!(v));
        }
    }
    Ok(doc)
}

/// Resolves the effective configuration from `--config` and flag overrides.
pub fn effective_config(common: &CommonArgs) -> Result<ModelConfig, CliError> {
    resolve_config(&load_document(common)?).map_err(CliError::Config)
}

fn output_dir(common: &CommonArgs) -> Result<PathBuf, CliError> {
    let dir = match &common.out {
        Some(p) => p.clone(),
        None => {
            let root = std::env::var_os(OUT_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from("out"));
            let stamp = chrono::Local::now().format("%Y%m%dT%H%M%S").to_string();
            let mut candidate = root.join(&stamp);
            let mut k = 1;
            while candidate.exists() {
                candidate = root.join(format!("{stamp}-{k}"));
                k += 1;
            }
            candidate
        }
    };
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_file(
    dir: &Path,
    name: &str,
    contents: &str,
    outputs: &mut Vec<String>,
) -> Result<(), CliError> {
    let mut f = fs::File::create(dir.join(name))?;
    f.write_all(contents.as_bytes())?;
    outputs.push(name.to_string());
    Ok(())
}

fn ground_state_csv(cfg: &ModelConfig, sigma: f64) -> Result<String, Error> {
    let g = ground_state(cfg.d, cfg.m, cfg.hbar)?;
    let grid = cfg.grid(cfg.grid_n);
    let gauss = gaussian_reference(sigma, &grid)?;
    let mut csv = String::with_capacity(64 * grid.len());
    csv.push_str(GROUND_STATE_HEADER);
    csv.push('\n');
    for (r, gd) in grid.iter().zip(gauss) {
        let _ = writeln!(
            csv,
            "{},{},{}",
            fmt_float(*r),
            fmt_float(g.density(*r)),
            fmt_float(gd)
        );
    }
    Ok(csv)
}

/// `t,r,density` rows for each requested time, plus per-time summaries.
pub fn density_csv(
    spectrum: &FloquetSpectrum,
    times: &[f64],
) -> Result<(String, Vec<Value>), Error> {
    let evaluator = DensityEvaluator::new(spectrum, spectrum.config.grid_n)?;
    let mut csv = String::new();
    csv.push_str(DENSITY_HEADER);
    csv.push('\n');
    let mut summaries = Vec::with_capacity(times.len());
    for &t in times {
        let profile = evaluator.profile(t);
        for (r, d) in profile.grid.iter().zip(&profile.density) {
            let _ = writeln!(csv, "{},{},{}", fmt_float(t), fmt_float(*r), fmt_float(*d));
        }
        let (_, peak) = profile.peak();
        summaries.push(json!({
            "t": t,
            "argmax": profile.argmax(),
            "peak": peak,
            "mean_return": profile_mean(&profile),
            "raw_norm": profile.raw_norm,
            "boundary_residual": boundary_residual(spectrum, t)?,
        }));
    }
    Ok((csv, summaries))
}

/// `t,mean_return,raw_norm` rows over one period, plus the summary block.
pub fn series_csv(
    spectrum: &FloquetSpectrum,
    samples: usize,
) -> Result<(String, SeriesSummary), Error> {
    let series = mean_return_series(spectrum, samples)?;
    let mut csv = String::with_capacity(80 * samples);
    csv.push_str(SERIES_HEADER);
    csv.push('\n');
    for ((t, r), n) in series
        .times
        .iter()
        .zip(&series.mean_r)
        .zip(&series.raw_norms)
    {
        let _ = writeln!(csv, "{},{},{}", fmt_float(*t), fmt_float(*r), fmt_float(*n));
    }
    Ok((csv, SeriesSummary::from(&series)))
}

fn oracle_passes(report: &OracleReport) -> bool {
    report.l2_rel < ORACLE_L2_TOL && report.norm_drift < ORACLE_NORM_DRIFT_TOL
}

/// Runs one parsed command.
pub fn execute(cli: &Cli) -> Result<RunOutcome, CliError> {
    let started = Instant::now();
    let config = effective_config(&cli.common)?;
    let dir = output_dir(&cli.common)?;
    let mut outputs = Vec::new();
    let mut spectrum_summary = None;
    let mut strict_failure = None;

    let summary = match &cli.command {
        Command::GroundState { sigma } => {
            let csv = ground_state_csv(&config, *sigma).map_err(CliError::Config)?;
            write_file(&dir, "ground_state.csv", &csv, &mut outputs)?;
            let g = ground_state(config.d, config.m, config.hbar)?;
            json!({ "E0": g.energy, "psi0_at_centre": g.value(0.0), "sigma": sigma })
        }
        Command::Spectrum => {
            let s = solve_spectrum(&config)?;
            spectrum_summary = Some(SpectrumSummary::from(&s));
            let text = serde_json::to_string_pretty(&s.export())?;
            write_file(&dir, "spectrum.json", &text, &mut outputs)?;
            json!({
                "self_consistency_residual": s.self_consistency_residual(),
                "truncation_adequate": s.truncation_adequate(),
            })
        }
        Command::Density { times } => {
            let s = solve_spectrum(&config)?;
            spectrum_summary = Some(SpectrumSummary::from(&s));
            let (csv, per_time) = density_csv(&s, times)?;
            write_file(&dir, "density.csv", &csv, &mut outputs)?;
            json!({ "profiles": per_time })
        }
        Command::Series { samples } => {
            let s = solve_spectrum(&config)?;
            spectrum_summary = Some(SpectrumSummary::from(&s));
            let (csv, summary) = series_csv(&s, *samples)?;
            write_file(&dir, "mean_return.csv", &csv, &mut outputs)?;
            serde_json::to_value(summary)?
        }
        Command::OracleCheck { t_end, strict } => {
            let s = solve_spectrum(&config)?;
            spectrum_summary = Some(SpectrumSummary::from(&s));
            let report = compare_analytic_numeric(&s, *t_end, &config)?;
            write_file(
                &dir,
                "oracle.json",
                &serde_json::to_string_pretty(&report)?,
                &mut outputs,
            )?;
            let pass = oracle_passes(&report);
            if *strict && !pass {
                strict_failure = Some(format!(
                    "l2_rel = {:e} (bound {ORACLE_L2_TOL:e}), norm_drift = {:e} (bound {ORACLE_NORM_DRIFT_TOL:e})",
                    report.l2_rel, report.norm_drift
                ));
            }
            json!({ "report": report, "pass": pass })
        }
        Command::EstimateMass { dp, dpdt, p0 } => {
            let m0 = estimate_stock_mass(*dp, *dpdt, config.hbar).map_err(CliError::Config)?;
            println!("{m0:.4e}");
            let scale = match p0 {
                Some(p0) => {
                    Some(MarketScale::new(*p0, *dp, *dpdt, config.hbar).map_err(CliError::Config)?)
                }
                None => None,
            };
            json!({
                "m0": m0,
                "market_scale": scale,
                "return_mass": scale.map(|s| s.return_mass()),
            })
        }
    };

    let manifest = RunManifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        command: cli.command.name().into(),
        config,
        spectrum: spectrum_summary,
        outputs,
        summary,
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    if let Some(msg) = strict_failure {
        return Err(CliError::Strict(msg));
    }
    Ok(RunOutcome {
        out_dir: dir,
        manifest,
    })
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            eprintln!("wrote {}", outcome.out_dir.display());
            0
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_float(-2.5), "-2.5000000000000000e0");
        assert_eq!(fmt_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cfg.json");
        fs::write(&path, r#"{"d": 0.3, "F": 0.0}"#).unwrap();
        let common = CommonArgs {
            config: Some(path),
            d: Some(0.25),
            grid_n: Some(101),
            ..CommonArgs::default()
        };
        let cfg = effective_config(&common).unwrap();
        assert_eq!(cfg.d, 0.25);
        assert_eq!(cfg.field, 0.0);
        assert_eq!(cfg.grid_n, 101);
    }

    #[test]
    fn bad_config_maps_to_exit_two() {
        let common = CommonArgs {
            grid_n: Some(100),
            ..CommonArgs::default()
        };
        assert_eq!(effective_config(&common).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn parses_field_flags_verbatim() {
        let cli = Cli::try_parse_from([
            "qwell", "spectrum", "--F", "0", "--L", "12", "--grid_n", "51",
        ])
        .unwrap();
        assert_eq!(cli.common.field, Some(0.0));
        assert_eq!(cli.common.sidebands, Some(12));
        assert_eq!(cli.common.grid_n, Some(51));
        let cli = Cli::try_parse_from(["qwell", "density", "--times", "0,5,7.5"]).unwrap();
        match cli.command {
            Command::Density { times } => assert_eq!(times, vec![0.0, 5.0, 7.5]),
            other => panic!("{other:?}"),
        }
    }
}
