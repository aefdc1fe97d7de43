//! Train-to-base-station link model.
//!
//! The base station sits `d0` meters off the track. Time `tau = 0` is the
//! instant of closest approach and the train leaves the cell after
//! `T = cell_radius / velocity` seconds. Effective noise grows with pathloss,
//! `N(tau) = W * N0 * d(tau)^alpha`, and rates are Shannon capacities in nats/s.

use crate::allocators::PowerProfile;
use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, DEFAULT_INTERVALS};

/// Slack allowed on either end of `[0, T]` for times produced by floating-point grids.
const TIME_SLACK: f64 = 1e-12;

pub fn dbw_to_watts(dbw: f64) -> f64 {
    10f64.powf(dbw / 10.0)
}

pub fn kmh_to_mps(kmh: f64) -> f64 {
    kmh / 3.6
}

/// Everything about the link except the receiver noise density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deployment {
    /// Signal bandwidth in Hz.
    pub bandwidth: f64,
    /// Average transmit power budget in watts.
    pub avg_power: f64,
    /// Minimum base-station to track distance in meters.
    pub d0: f64,
    /// Cell radius in meters.
    pub cell_radius: f64,
    /// Train speed in m/s.
    pub velocity: f64,
    pub pathloss_exp: f64,
}

impl Deployment {
    pub fn validate(&self) -> Result<()> {
        positive("bandwidth", self.bandwidth)?;
        positive("avg_power", self.avg_power)?;
        positive("d0", self.d0)?;
        positive("cell_radius", self.cell_radius)?;
        positive("velocity", self.velocity)?;
        if !(self.pathloss_exp >= 0.0 && self.pathloss_exp.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "pathloss_exp",
                value: self.pathloss_exp,
                reason: "must be finite and nonnegative",
            });
        }
        let t = self.traversal_time();
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::InvalidParameter {
                field: "cell_radius / velocity",
                value: t,
                reason: "traversal time must be finite and positive",
            });
        }
        Ok(())
    }

    pub fn traversal_time(&self) -> f64 {
        self.cell_radius / self.velocity
    }

    pub fn with_noise_psd(self, noise_psd: f64) -> Result<Scenario> {
        Scenario::from_deployment(self, noise_psd)
    }
}

/// A fully specified link, all quantities SI.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    pub bandwidth: f64,
    pub avg_power: f64,
    pub d0: f64,
    pub cell_radius: f64,
    pub velocity: f64,
    pub pathloss_exp: f64,
    /// Noise power spectral density in W/Hz.
    pub noise_psd: f64,
}

impl Scenario {
    pub fn from_deployment(d: Deployment, noise_psd: f64) -> Result<Self> {
        let s = Self {
            bandwidth: d.bandwidth,
            avg_power: d.avg_power,
            d0: d.d0,
            cell_radius: d.cell_radius,
            velocity: d.velocity,
            pathloss_exp: d.pathloss_exp,
            noise_psd,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn deployment(&self) -> Deployment {
        Deployment {
            bandwidth: self.bandwidth,
            avg_power: self.avg_power,
            d0: self.d0,
            cell_radius: self.cell_radius,
            velocity: self.velocity,
            pathloss_exp: self.pathloss_exp,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.deployment().validate()?;
        positive("noise_psd", self.noise_psd)
    }

    /// `T`, the time from closest approach to the cell edge.
    pub fn traversal_time(&self) -> f64 {
        self.cell_radius / self.velocity
    }

    /// Total energy budget `avg_power * T` in joules.
    pub fn energy_budget(&self) -> f64 {
        self.avg_power * self.traversal_time()
    }

    pub fn distance(&self, tau: f64) -> Result<f64> {
        let tau = self.check_time(tau)?;
        Ok(self.distance_unchecked(tau))
    }

    pub fn noise_power(&self, tau: f64) -> Result<f64> {
        let tau = self.check_time(tau)?;
        Ok(self.noise_unchecked(tau))
    }

    pub fn capacity(&self, power: f64, tau: f64) -> Result<f64> {
        if power.is_nan() || power < 0.0 {
            return Err(Error::OutOfDomain {
                what: "transmit power",
                value: power,
                lower: 0.0,
                upper: f64::INFINITY,
            });
        }
        let tau = self.check_time(tau)?;
        Ok(self.capacity_unchecked(power, tau))
    }

    /// `\int_0^T N(tau) dtau` by quadrature.
    pub fn noise_integral(&self) -> Result<f64> {
        integrate_piecewise(
            |t| self.noise_unchecked(t),
            0.0,
            self.traversal_time(),
            &[],
            DEFAULT_INTERVALS,
        )
    }

    pub(crate) fn distance_unchecked(&self, tau: f64) -> f64 {
        let vt = self.velocity * tau;
        (self.d0 * self.d0 + vt * vt).sqrt()
    }

    pub(crate) fn noise_unchecked(&self, tau: f64) -> f64 {
        if self.pathloss_exp == 0.0 {
            return self.bandwidth * self.noise_psd;
        }
        let vt = self.velocity * tau;
        let d2 = self.d0 * self.d0 + vt * vt;
        self.bandwidth * self.noise_psd * d2.powf(0.5 * self.pathloss_exp)
    }

    pub(crate) fn capacity_unchecked(&self, power: f64, tau: f64) -> f64 {
        self.bandwidth * (power / self.noise_unchecked(tau)).ln_1p()
    }

    pub(crate) fn check_time(&self, tau: f64) -> Result<f64> {
        let t = self.traversal_time();
        let slack = TIME_SLACK * t;
        if tau >= -slack && tau <= t + slack {
            Ok(tau.clamp(0.0, t))
        } else {
            Err(Error::OutOfDomain {
                what: "tau",
                value: tau,
                lower: 0.0,
                upper: t,
            })
        }
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field,
            value,
            reason: "must be finite and positive",
        })
    }
}

/// Cumulative service `S(t)` sampled on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceCurve {
    pub times: Vec<f64>,
    /// Nats delivered on `[0, times[i]]`.
    pub service: Vec<f64>,
}

impl ServiceCurve {
    pub fn total(&self) -> f64 {
        self.service.last().copied().unwrap_or(0.0)
    }
}

/// Nats delivered on `[0, t]` under `profile`.
///
/// Panels never straddle the profile's breakpoints (e.g. a water-filling cutoff).
pub fn channel_service(s: &Scenario, profile: &PowerProfile, t: f64) -> Result<f64> {
    let t = s.check_time(t)?;
    service_between(s, profile, 0.0, t, DEFAULT_INTERVALS)
}

/// Nats delivered on `[a, b]`, with `intervals` panels budgeted per full traversal.
pub fn service_between(
    s: &Scenario,
    profile: &PowerProfile,
    a: f64,
    b: f64,
    intervals: usize,
) -> Result<f64> {
    let a = s.check_time(a)?;
    let b = s.check_time(b)?;
    if b < a {
        return Err(Error::OutOfDomain {
            what: "service interval end",
            value: b,
            lower: a,
            upper: s.traversal_time(),
        });
    }
    if b == a {
        return Ok(0.0);
    }
    let share = ((intervals as f64) * (b - a) / s.traversal_time()).ceil() as usize;
    integrate_piecewise(
        |tau| s.capacity_unchecked(profile.power_at(s, tau), tau),
        a,
        b,
        &profile.breakpoints(),
        share.max(2),
    )
}

/// `S(t)` at each of `times`, accumulated segment by segment.
///
/// `times` must start at 0 and be strictly increasing.
pub fn service_curve(s: &Scenario, profile: &PowerProfile, times: &[f64]) -> Result<ServiceCurve> {
    let mut service = Vec::with_capacity(times.len());
    let mut acc = 0.0;
    let mut prev = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if i == 0 && t != 0.0 {
            return Err(Error::OutOfDomain {
                what: "first service time",
                value: t,
                lower: 0.0,
                upper: 0.0,
            });
        }
        if i > 0 && t <= prev {
            return Err(Error::OutOfDomain {
                what: "service time (not increasing)",
                value: t,
                lower: prev,
                upper: s.traversal_time(),
            });
        }
        acc += service_between(s, profile, prev, t, DEFAULT_INTERVALS)?;
        service.push(acc);
        prev = t;
    }
    Ok(ServiceCurve {
        times: times.to_vec(),
        service,
    })
}
