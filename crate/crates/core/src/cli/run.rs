use std::fs;
use std::path::{Path, PathBuf};

use crate::allocators::{allocate, uniform_times, Allocation, Scheme};
use crate::analysis::scheme_metrics;
use crate::channel::{service_curve, Scenario};
use crate::error::{Error, Result};

use super::config::{NoiseSource, RunConfig};

pub const PROFILES_FILE: &str = "profiles.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const TRACE_FILE: &str = "solver_trace.csv";
pub const CALIBRATION_FILE: &str = "calibration.txt";

const SIGNIFICANT_DIGITS: i32 = 12;

/// Plain decimal with 12 significant digits.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i32;
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RateUnit {
    #[default]
    Nats,
    Bits,
}

impl RateUnit {
    fn scale(self) -> f64 {
        match self {
            RateUnit::Nats => 1.0,
            RateUnit::Bits => std::f64::consts::LOG2_E,
        }
    }

    fn rate_label(self) -> &'static str {
        match self {
            RateUnit::Nats => "rate_nats_per_s",
            RateUnit::Bits => "rate_bits_per_s",
        }
    }

    fn service_label(self) -> &'static str {
        match self {
            RateUnit::Nats => "service_nats",
            RateUnit::Bits => "service_bits",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out_dir: Option<PathBuf>,
    pub unit: RateUnit,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub scenario: Scenario,
    pub out_dir: PathBuf,
    /// Schemes whose multiplier search did not converge.
    pub failed: Vec<Scheme>,
}

impl RunOutcome {
    pub fn success(&self) -> bool {
        self.failed.is_empty()
    }
}

/// Runs every configured scheme and writes the CSV outputs.
pub fn run(config: &RunConfig, options: &RunOptions) -> Result<RunOutcome> {
    let out_dir = options
        .out_dir
        .clone()
        .unwrap_or_else(|| config.output.csv_dir.clone());
    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;

    let scenario = config.scenario()?;
    if let NoiseSource::TargetCutoff(_) = config.noise {
        write_calibration(&out_dir, scenario.noise_psd)?;
    }

    let allocations: Vec<Allocation> = config
        .output
        .schemes
        .iter()
        .map(|&scheme| allocate(&scenario, scheme, &config.settings))
        .collect::<Result<_>>()?;

    let times = uniform_times(scenario.traversal_time(), config.output.samples);
    write_profiles(&out_dir, &scenario, &allocations, &times, options.unit)?;
    write_metrics(&out_dir, &scenario, &allocations, options.unit)?;
    if let Some(report) = allocations.iter().find_map(|a| a.report.as_ref()) {
        let mut w = csv_writer(&out_dir.join(TRACE_FILE))?;
        w.write_record(["iteration", "lambda", "r_delta_p"])?;
        for e in &report.lambda_trajectory {
            w.write_record([
                e.iteration.to_string(),
                format_number(e.lambda),
                format_number(e.power_ratio),
            ])?;
        }
        flush(w, &out_dir.join(TRACE_FILE))?;
    }

    Ok(RunOutcome {
        scenario,
        failed: allocations
            .iter()
            .filter(|a| !a.converged())
            .map(|a| a.profile.scheme())
            .collect(),
        out_dir,
    })
}

fn write_profiles(
    dir: &Path,
    s: &Scenario,
    allocations: &[Allocation],
    times: &[f64],
    unit: RateUnit,
) -> Result<()> {
    let path = dir.join(PROFILES_FILE);
    let mut w = csv_writer(&path)?;
    let mut header = vec!["tau_s".to_owned()];
    for a in allocations {
        let tag = a.profile.scheme().tag();
        header.push(format!("power_w_{tag}"));
        header.push(format!("{}_{tag}", unit.rate_label()));
        header.push(format!("{}_{tag}", unit.service_label()));
    }
    w.write_record(&header)?;

    let mut columns = Vec::with_capacity(allocations.len());
    for a in allocations {
        let powers: Vec<f64> = times.iter().map(|&t| a.profile.power_at(s, t)).collect();
        let rates = times
            .iter()
            .zip(&powers)
            .map(|(&t, &p)| s.capacity(p, t))
            .collect::<Result<Vec<_>>>()?;
        let service = service_curve(s, &a.profile, times)?.service;
        columns.push((powers, rates, service));
    }

    let scale = unit.scale();
    for (i, &t) in times.iter().enumerate() {
        let mut row = vec![format_number(t)];
        for (powers, rates, service) in &columns {
            row.push(format_number(powers[i]));
            row.push(format_number(rates[i] * scale));
            row.push(format_number(service[i] * scale));
        }
        w.write_record(&row)?;
    }
    flush(w, &path)
}

fn write_metrics(
    dir: &Path,
    s: &Scenario,
    allocations: &[Allocation],
    unit: RateUnit,
) -> Result<()> {
    let path = dir.join(METRICS_FILE);
    let mut w = csv_writer(&path)?;
    let (service, rate) = match unit {
        RateUnit::Nats => ("total_service_nats", "nats_per_s"),
        RateUnit::Bits => ("total_service_bits", "bits_per_s"),
    };
    w.write_record([
        "scheme".to_owned(),
        service.to_owned(),
        "pf_utility".to_owned(),
        format!("min_rate_{rate}"),
        format!("max_rate_{rate}"),
        "rate_cv".to_owned(),
        "mean_power_error".to_owned(),
        "converged".to_owned(),
    ])?;
    let scale = unit.scale();
    for a in allocations {
        let m = scheme_metrics(s, &a.profile, a.converged())?;
        w.write_record([
            m.scheme.tag().to_owned(),
            format_number(m.total_service * scale),
            format_number(m.pf_utility),
            format_number(m.min_rate * scale),
            format_number(m.max_rate * scale),
            format_number(m.rate_cv),
            format_number(m.mean_power_error),
            m.converged.to_string(),
        ])?;
    }
    flush(w, &path)
}

/// Writes `noise_psd_w_per_hz=<value>` with round-trip precision.
pub fn write_calibration(dir: &Path, noise_psd: f64) -> Result<PathBuf> {
    let path = dir.join(CALIBRATION_FILE);
    fs::write(&path, format!("noise_psd_w_per_hz={noise_psd:e}\n"))
        .map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Reads a file written by [`write_calibration`].
pub fn read_calibration(path: &Path) -> Result<f64> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.trim()
        .strip_prefix("noise_psd_w_per_hz=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| {
            Error::Config(format!(
                "{}: expected noise_psd_w_per_hz=<value>",
                path.display()
            ))
        })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

fn flush(mut w: csv::Writer<fs::File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}
