//! Command-line surface: synthesis, detection, worst-case construction,
//! bound verification, and the experiment harness, with JSON/CSV I/O.
//!
//! Exit codes are contractual: 0 on success, 1 when a verification check
//! reports `holds == false` (or a constructed pair fails its defining
//! check), 2 on usage, configuration, or I/O errors. Output files are
//! written atomically (temp file in the target directory, then rename), so
//! a failing run never leaves partial data behind.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{
    check_appendix_inequalities, sweep_eta_stability, sweep_min_eta, sweep_nonlinear_approx,
    sweep_residual_lower_bound, sweep_eta_from_residual, BoundCheckReport,
};
use crate::detection::{detect_at_s_detailed, detect_count_sweep, DetectionResult};
use crate::error::{Error, Result};
use crate::experiments::{
    fit_separating_lines, phase_plot_script, records_to_csv, run_experiment_1_seeded,
    run_phase_transition, run_separation_sweep, SweepConfig,
};
use crate::measure::{synthesize_measurement, DiscreteMeasure, Measurement, SamplingGrid};
use crate::rng::derive_seed;
use crate::worst_case::{construct_number_instance, construct_support_instance, AdversarialKind};

#[derive(Parser)]
#[command(
    name = "line-spectra",
    version,
    about = "Line spectral estimation: number detection, resolution-limit instances, bound checks"
)]
struct Cli {
    /// Seed for every randomized operation.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Number,
    Support,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a measure's Fourier transform on an equispaced grid with
    /// seeded disk noise.
    Synth {
        /// Measure JSON: {"supports": [...], "amplitudes_re": [...], "amplitudes_im": [...]}.
        #[arg(long)]
        measure: PathBuf,
        /// Frequency cutoff.
        #[arg(long)]
        omega: f64,
        /// Number of samples.
        #[arg(long)]
        m: usize,
        /// Noise level (entrywise magnitude bound).
        #[arg(long)]
        sigma: f64,
        /// Output path for the measurement JSON; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Detect the number of spectra in a measurement JSON.
    Detect {
        #[arg(long)]
        input: PathBuf,
        /// Override the declared noise level.
        #[arg(long)]
        sigma: Option<f64>,
        /// Threshold at this single matrix size instead of sweeping.
        #[arg(long, conflicts_with = "sweep")]
        s: Option<usize>,
        /// Sweep every admissible size (the default).
        #[arg(long)]
        sweep: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Construct an adversarial pair of measures realizing a resolution
    /// lower bound, with its verification report.
    Worstcase {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        omega: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        mmin: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run inequality checkers; one JSON report per line. Exits 1 if any
    /// check fails to hold.
    Verify {
        /// Check the Stirling-based factorial inequalities.
        #[arg(long)]
        appendix: bool,
        /// Largest n for the appendix checks.
        #[arg(long, default_value_t = 30)]
        n_max: u64,
        /// Run the randomized approximation-bound sweeps.
        #[arg(long)]
        section3: bool,
        /// Trial count scale for the randomized sweeps.
        #[arg(long, default_value_t = 20)]
        configs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase-transition Monte Carlo driven by a JSON config, logged as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also emit a gnuplot script rendering the scatter and fitted lines.
        #[arg(long)]
        plot_script: Option<PathBuf>,
    },
    /// Reproduce the four-spike recovery experiment (expected detection: 4).
    Experiment1 {
        /// Write the full detection trace here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the four-spike separation and report the detected count per tau.
    Figure1 {
        #[arg(long, default_value_t = 1e-7)]
        sigma: f64,
        #[arg(long, default_value_t = 0.01)]
        tau_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point for the binary: parses `std::env::args` and returns the
/// process exit status.
pub fn run() -> i32 {
    dispatch(std::env::args())
}

/// Parses and executes a full command line; returns the exit status.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::VerificationFailed(_) => 1,
                _ => 2,
            }
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synth { measure, omega, m, sigma, out } => {
            let mu: DiscreteMeasure = read_json(&measure)?;
            let grid = SamplingGrid::new(omega, m)?;
            let measurement = synthesize_measurement(&mu, &grid, sigma, cli.seed)?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&measurement)?)
        }
        Command::Detect { input, sigma, s, sweep: _, out } => {
            let mut measurement: Measurement = read_json(&input)?;
            if let Some(sigma) = sigma {
                if !(sigma >= 0.0) {
                    return Err(Error::ConfigError("sigma must be >= 0".into()));
                }
                measurement.sigma = sigma;
            }
            let result: DetectionResult = match s {
                Some(s) => {
                    let pass = detect_at_s_detailed(&measurement, s)?;
                    DetectionResult {
                        n_detected: pass.n,
                        s_range_used: (s, s),
                        saturated: pass.saturated,
                        per_s: vec![pass],
                    }
                }
                None => detect_count_sweep(&measurement)?,
            };
            emit(out.as_deref(), &serde_json::to_string_pretty(&result)?)
        }
        Command::Worstcase { kind, n, omega, sigma, mmin, out } => {
            let pair = match kind {
                KindArg::Number => construct_number_instance(n, omega, sigma, mmin)?,
                KindArg::Support => construct_support_instance(n, omega, sigma, mmin)?,
            };
            debug_assert!(matches!(
                (kind, pair.kind),
                (KindArg::Number, AdversarialKind::Number)
                    | (KindArg::Support, AdversarialKind::Support)
            ));
            emit(out.as_deref(), &serde_json::to_string_pretty(&pair)?)
        }
        Command::Verify { appendix, n_max, section3, configs, out } => {
            // With no selector, run everything.
            let run_all = !appendix && !section3;
            let mut reports: Vec<BoundCheckReport> = Vec::new();
            if appendix || run_all {
                reports.extend(check_appendix_inequalities(2, n_max)?);
            }
            if section3 || run_all {
                let seed = cli.seed;
                reports.extend(sweep_residual_lower_bound(configs, derive_seed(seed, 1))?);
                reports.extend(sweep_min_eta(configs.div_ceil(2), 4, derive_seed(seed, 2))?);
                reports.extend(sweep_nonlinear_approx(
                    configs.div_ceil(4).max(1),
                    derive_seed(seed, 3),
                )?);
                reports.extend(sweep_eta_from_residual(configs, derive_seed(seed, 4))?);
                reports.extend(sweep_eta_stability(configs.div_ceil(2), derive_seed(seed, 5))?);
            }
            let mut lines = String::new();
            for r in &reports {
                lines.push_str(&serde_json::to_string(r)?);
                lines.push('\n');
            }
            emit(out.as_deref(), &lines)?;
            let failing = reports.iter().filter(|r| !r.holds).count();
            if failing > 0 {
                return Err(Error::VerificationFailed(format!(
                    "{failing} of {} checks did not hold",
                    reports.len()
                )));
            }
            Ok(())
        }
        Command::Sweep { config, out, plot_script } => {
            let config: SweepConfig = read_json(&config)?;
            let records = run_phase_transition(&config)?;
            write_atomic(&out, &records_to_csv(&records))?;
            if let Some(script_path) = plot_script {
                let slope = 2.0 * config.n as f64 - 2.0;
                let fit = fit_separating_lines(&records, slope)?;
                let csv_name = out.to_string_lossy();
                write_atomic(&script_path, &phase_plot_script(&csv_name, &fit))?;
            }
            Ok(())
        }
        Command::Experiment1 { out } => {
            let result = run_experiment_1_seeded(cli.seed)?;
            println!("{}", serde_json::json!({ "n_detected": result.n_detected }));
            if let Some(path) = out {
                write_atomic(&path, &serde_json::to_string_pretty(&result)?)?;
            }
            Ok(())
        }
        Command::Figure1 { sigma, tau_step, out } => {
            if !(tau_step > 0.0 && tau_step <= 1.0) {
                return Err(Error::ConfigError(format!(
                    "tau step must lie in (0, 1], got {tau_step}"
                )));
            }
            let mut taus = Vec::new();
            let mut tau = tau_step;
            while tau <= 1.0 + 1e-12 {
                taus.push(tau.min(1.0));
                tau += tau_step;
            }
            let results = run_separation_sweep(&taus, sigma, cli.seed)?;
            let rows: Vec<serde_json::Value> = results
                .iter()
                .map(|(tau, n)| serde_json::json!({ "tau": tau, "n_detected": n }))
                .collect();
            emit(out.as_deref(), &serde_json::to_string_pretty(&rows)?)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ConfigError(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

/// Writes via a temp file in the destination directory plus rename, so the
/// destination is never partially written.
fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn emit(out: Option<&Path>, data: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, data),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(data.as_bytes())?;
            if !data.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}
