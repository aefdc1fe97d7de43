//! Command-line front end: `run` writes the comparison CSVs, `calibrate`
//! recovers the noise density behind a water-filling cutoff.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

pub use config::{
    load_config, parse_config, NoiseSource, OutputConfig, RunConfig, DEFAULT_SAMPLES,
};
pub use run::{
    format_number, read_calibration, run, write_calibration, RateUnit, RunOptions, RunOutcome,
    CALIBRATION_FILE, METRICS_FILE, PROFILES_FILE, TRACE_FILE,
};

use crate::allocators::{calibrate_noise, waterfilling_pa};
use crate::error::{Error, Result};

pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_NUMERIC: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hsr-power",
    version,
    about = "Power allocation along a train's pass through one cell"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the configured schemes and write profiles.csv, metrics.csv and solver_trace.csv.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output.csv_dir`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Report rates and service in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Find the noise density that makes water-filling stop transmitting at a given time.
    Calibrate {
        #[arg(long)]
        config: PathBuf,
        /// Seconds; defaults to the config's `target_cutoff_s`.
        #[arg(long)]
        target_cutoff: Option<f64>,
        /// Where to write calibration.txt; defaults to `output.csv_dir`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

/// Parses `args`, executes, and maps the outcome to the process exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_NUMERIC),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() {
                EXIT_VALIDATION
            } else {
                EXIT_NUMERIC
            })
        }
    }
}

fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Run {
            config,
            out_dir,
            bits,
        } => {
            let config = load_config(&config)?;
            let options = RunOptions {
                out_dir,
                unit: if bits { RateUnit::Bits } else { RateUnit::Nats },
            };
            let outcome = run(&config, &options)?;
            println!(
                "wrote {} schemes to {} (noise_psd_w_per_hz = {:.5e})",
                config.output.schemes.len(),
                outcome.out_dir.display(),
                outcome.scenario.noise_psd
            );
            for scheme in &outcome.failed {
                eprintln!("error: {scheme} did not converge");
            }
            Ok(outcome.success())
        }
        Command::Calibrate {
            config,
            target_cutoff,
            out_dir,
        } => {
            let config = load_config(&config)?;
            let target = match (target_cutoff, config.noise) {
                (Some(t), _) => t,
                (None, NoiseSource::TargetCutoff(t)) => t,
                (None, NoiseSource::Psd(_)) => {
                    return Err(Error::Config(
                        "no target cutoff: pass --target-cutoff or set `target_cutoff_s`".into(),
                    ))
                }
            };
            let psd = calibrate_noise(&config.deployment, target)?;
            let scenario = config.deployment.with_noise_psd(psd)?;
            let cutoff = waterfilling_pa(&scenario, &config.settings)?
                .cutoff()
                .unwrap_or(scenario.traversal_time());
            let dir = out_dir.unwrap_or(config.output.csv_dir);
            std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let path = write_calibration(&dir, psd)?;
            println!("noise_psd_w_per_hz = {psd:.5e}");
            println!("water-filling cutoff = {cutoff:.6} s");
            println!("wrote {}", path.display());
            Ok(true)
        }
    }
}
