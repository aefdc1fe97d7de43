//! Constant power, channel inversion and water-filling.

use crate::channel::{Deployment, Scenario};
use crate::error::{Error, Result};
use crate::numerics::{find_root_monotone, integrate_piecewise, DEFAULT_INTERVALS};

use super::{PowerProfile, ProfileShape, Scheme, SolverSettings};

/// Search range for [`calibrate_noise`], in W/Hz.
pub const NOISE_PSD_BRACKET: (f64, f64) = (1e-25, 1e-5);

pub fn constant_pa(s: &Scenario, settings: &SolverSettings) -> Result<PowerProfile> {
    s.validate()?;
    settings.validate()?;
    Ok(PowerProfile::sample(
        s,
        Scheme::Constant,
        ProfileShape::Constant { power: s.avg_power },
        settings.grid_points,
    ))
}

/// Holds `P / N` at the constant `k0 = avg_power * T / \int N`, so the rate is flat.
pub fn inversion_pa(s: &Scenario, settings: &SolverSettings) -> Result<PowerProfile> {
    s.validate()?;
    settings.validate()?;
    let k0 = s.energy_budget() / s.noise_integral()?;
    Ok(PowerProfile::sample(
        s,
        Scheme::Inversion,
        ProfileShape::Inversion { k0 },
        settings.grid_points,
    ))
}

/// `\int_0^{t1} (N(t1) - N(tau)) dtau`, the energy a water level of `N(t1)` spends.
fn energy_below_level(s: &Scenario, t1: f64) -> Result<f64> {
    if t1 <= 0.0 {
        return Ok(0.0);
    }
    let level = s.noise_unchecked(t1);
    integrate_piecewise(
        |tau| level - s.noise_unchecked(tau),
        0.0,
        t1,
        &[],
        DEFAULT_INTERVALS,
    )
}

/// Maximizes total service: `P = max(level - N, 0)`.
///
/// When the level that spends the whole budget sits below `N(T)` the train
/// gets nothing after the cutoff `t1` where `N(t1) = level`; otherwise the
/// level is `avg_power + mean(N)` and power is positive to the cell edge.
pub fn waterfilling_pa(s: &Scenario, settings: &SolverSettings) -> Result<PowerProfile> {
    s.validate()?;
    settings.validate()?;
    let t = s.traversal_time();
    let budget = s.energy_budget();

    let shape = if energy_below_level(s, t)? >= budget {
        let g = |t1: f64| energy_below_level(s, t1).map_or(f64::NAN, |e| e - budget);
        let cutoff = find_root_monotone(g, 0.0, t, settings.root_tol_for(t))?;
        ProfileShape::WaterFilling {
            level: s.noise_unchecked(cutoff),
            cutoff,
        }
    } else {
        ProfileShape::WaterFilling {
            level: s.avg_power + s.noise_integral()? / t,
            cutoff: t,
        }
    };
    Ok(PowerProfile::sample(
        s,
        Scheme::WaterFilling,
        shape,
        settings.grid_points,
    ))
}

/// Noise density that puts the water-filling cutoff at `target_cutoff`.
///
/// The cutoff condition `W N0 \int_0^{t1} (d(t1)^a - d^a) = avg_power * T` is
/// linear in `N0`, so it is solved directly at `t1 = target_cutoff`.
pub fn calibrate_noise(d: &Deployment, target_cutoff: f64) -> Result<f64> {
    d.validate()?;
    let t = d.traversal_time();
    if !(target_cutoff > 0.0 && target_cutoff < t) {
        return Err(Error::OutOfDomain {
            what: "target cutoff",
            value: target_cutoff,
            lower: 0.0,
            upper: t,
        });
    }
    // Unit noise density; energy_below_level is then W * \int (d(t1)^a - d^a).
    let unit = Scenario::from_deployment(*d, 1.0)?;
    let per_unit_psd = energy_below_level(&unit, target_cutoff)?;
    let psd = unit.energy_budget() / per_unit_psd;

    let (min_psd, max_psd) = NOISE_PSD_BRACKET;
    if !(psd >= min_psd && psd <= max_psd) {
        let settings = SolverSettings::default();
        let cutoff_at = |psd: f64| -> Result<f64> {
            let s = Scenario::from_deployment(*d, psd)?;
            Ok(waterfilling_pa(&s, &settings)?.cutoff().unwrap_or(t))
        };
        return Err(Error::Calibration {
            target: target_cutoff,
            min_psd,
            max_psd,
            cutoff_at_min_psd: cutoff_at(min_psd)?,
            cutoff_at_max_psd: cutoff_at(max_psd)?,
        });
    }
    Ok(psd)
}
