//! TOML run configuration.
//!
//! ```toml
//! [scenario]
//! bandwidth_mhz = 5.0
//! avg_power_dbw = 5.0
//! d0_m = 100.0
//! cell_radius_km = 2.5
//! velocity_kmh = 300.0
//! pathloss_exp = 4.0
//! target_cutoff_s = 10.4        # or: noise_psd_w_per_hz = 3.9e-18
//!
//! [solver]                      # every key optional
//! lambda_step_init = 0.01
//! power_ratio_tol = 0.001
//! max_iterations = 10000
//! grid_points = 2048
//!
//! [output]                      # every key optional
//! csv_dir = "out"
//! schemes = "all"               # or a list of scheme tags
//! samples = 301
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::allocators::{calibrate_noise, Scheme, SolverSettings};
use crate::channel::{dbw_to_watts, kmh_to_mps, Deployment, Scenario};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSource {
    Psd(f64),
    /// Calibrate the noise density so water-filling stops at this time.
    TargetCutoff(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub csv_dir: PathBuf,
    pub schemes: Vec<Scheme>,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub deployment: Deployment,
    pub noise: NoiseSource,
    pub settings: SolverSettings,
    pub output: OutputConfig,
}

impl RunConfig {
    /// The completed scenario, calibrating the noise density if requested.
    pub fn scenario(&self) -> Result<Scenario> {
        let psd = match self.noise {
            NoiseSource::Psd(psd) => psd,
            NoiseSource::TargetCutoff(t) => calibrate_noise(&self.deployment, t)?,
        };
        self.deployment.with_noise_psd(psd)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    scenario: RawScenario,
    #[serde(default)]
    solver: RawSolver,
    #[serde(default)]
    output: RawOutput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    bandwidth_mhz: f64,
    avg_power_dbw: f64,
    d0_m: f64,
    cell_radius_km: f64,
    velocity_kmh: f64,
    pathloss_exp: f64,
    noise_psd_w_per_hz: Option<f64>,
    target_cutoff_s: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSolver {
    lambda_step_init: Option<f64>,
    power_ratio_tol: Option<f64>,
    max_iterations: Option<usize>,
    grid_points: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    csv_dir: Option<PathBuf>,
    schemes: Option<RawSchemes>,
    samples: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawSchemes {
    Keyword(String),
    List(Vec<String>),
}

pub const DEFAULT_SAMPLES: usize = 301;

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_owned()))?;
    let sc = raw.scenario;

    for (key, value) in [
        ("bandwidth_mhz", sc.bandwidth_mhz),
        ("d0_m", sc.d0_m),
        ("cell_radius_km", sc.cell_radius_km),
        ("velocity_kmh", sc.velocity_kmh),
    ] {
        require(key, value > 0.0 && value.is_finite(), "must be positive")?;
    }
    require(
        "avg_power_dbw",
        sc.avg_power_dbw.is_finite(),
        "must be finite",
    )?;
    require(
        "pathloss_exp",
        sc.pathloss_exp >= 0.0 && sc.pathloss_exp.is_finite(),
        "must be nonnegative",
    )?;

    let deployment = Deployment {
        bandwidth: sc.bandwidth_mhz * 1e6,
        avg_power: dbw_to_watts(sc.avg_power_dbw),
        d0: sc.d0_m,
        cell_radius: sc.cell_radius_km * 1e3,
        velocity: kmh_to_mps(sc.velocity_kmh),
        pathloss_exp: sc.pathloss_exp,
    };
    deployment.validate()?;

    let noise = match (sc.noise_psd_w_per_hz, sc.target_cutoff_s) {
        (Some(psd), None) => {
            require(
                "noise_psd_w_per_hz",
                psd > 0.0 && psd.is_finite(),
                "must be positive",
            )?;
            NoiseSource::Psd(psd)
        }
        (None, Some(t)) => {
            require(
                "target_cutoff_s",
                t > 0.0 && t < deployment.traversal_time(),
                "must lie strictly inside the traversal time",
            )?;
            NoiseSource::TargetCutoff(t)
        }
        _ => {
            return Err(Error::Config(
                "scenario needs exactly one of `noise_psd_w_per_hz` and `target_cutoff_s`".into(),
            ))
        }
    };

    let defaults = SolverSettings::default();
    let settings = SolverSettings {
        lambda_step_init: raw
            .solver
            .lambda_step_init
            .unwrap_or(defaults.lambda_step_init),
        power_ratio_tol: raw
            .solver
            .power_ratio_tol
            .unwrap_or(defaults.power_ratio_tol),
        max_iterations: raw.solver.max_iterations.unwrap_or(defaults.max_iterations),
        grid_points: raw.solver.grid_points.unwrap_or(defaults.grid_points),
        root_tol: None,
    };
    settings
        .validate()
        .map_err(|e| Error::Config(format!("solver: {e}")))?;

    let schemes = match raw.output.schemes {
        None => Scheme::ALL.to_vec(),
        Some(RawSchemes::Keyword(k)) if k == "all" => Scheme::ALL.to_vec(),
        Some(RawSchemes::Keyword(k)) => vec![k.parse()?],
        Some(RawSchemes::List(list)) => {
            if list.iter().any(|k| k == "all") {
                Scheme::ALL.to_vec()
            } else {
                list.iter().map(|k| k.parse()).collect::<Result<_>>()?
            }
        }
    };
    require(
        "schemes",
        !schemes.is_empty(),
        "must name at least one scheme",
    )?;
    let samples = raw.output.samples.unwrap_or(DEFAULT_SAMPLES);
    require("samples", samples >= 2, "must be at least 2")?;

    Ok(RunConfig {
        deployment,
        noise,
        settings,
        output: OutputConfig {
            csv_dir: raw.output.csv_dir.unwrap_or_else(|| PathBuf::from(".")),
            schemes,
            samples,
        },
    })
}

fn require(key: &str, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!("`{key}` {what}")))
    }
}
