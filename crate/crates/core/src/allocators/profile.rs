use std::fmt;
use std::str::FromStr;

use crate::channel::Scenario;
use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, lambert_w0_unchecked, DEFAULT_INTERVALS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Constant,
    Inversion,
    WaterFilling,
    PfNearOptimal,
    PfEpsilonOptimal,
    /// Seeded competitor used to probe the fairness criterion.
    RandomFeasible,
}

impl Scheme {
    /// The five allocation schemes, in reporting order.
    pub const ALL: [Scheme; 5] = [
        Scheme::Constant,
        Scheme::Inversion,
        Scheme::WaterFilling,
        Scheme::PfNearOptimal,
        Scheme::PfEpsilonOptimal,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Scheme::Constant => "constant",
            Scheme::Inversion => "inversion",
            Scheme::WaterFilling => "waterfilling",
            Scheme::PfNearOptimal => "pf_near_optimal",
            Scheme::PfEpsilonOptimal => "pf_epsilon_optimal",
            Scheme::RandomFeasible => "random_feasible",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|scheme| scheme.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

/// The law generating `P(tau)`, with the parameters each scheme reports.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape {
    Constant {
        power: f64,
    },
    /// `P = k0 * N(tau)`.
    Inversion {
        k0: f64,
    },
    /// `P = max(level - N(tau), 0)`, zero after `cutoff`.
    WaterFilling {
        level: f64,
        cutoff: f64,
    },
    /// `P = 1 / (lambda * W0(1 / (lambda * N))) - N`.
    ProportionalFair {
        inv_lambda: f64,
    },
    /// Linear interpolation between `(tau, power)` knots.
    PiecewiseLinear {
        knots: Vec<(f64, f64)>,
    },
}

impl ProfileShape {
    pub fn power_at(&self, s: &Scenario, tau: f64) -> f64 {
        match self {
            ProfileShape::Constant { power } => *power,
            ProfileShape::Inversion { k0 } => k0 * s.noise_unchecked(tau),
            ProfileShape::WaterFilling { level, cutoff } => {
                if tau > *cutoff {
                    0.0
                } else {
                    (level - s.noise_unchecked(tau)).max(0.0)
                }
            }
            ProfileShape::ProportionalFair { inv_lambda } => {
                pf_power(*inv_lambda, s.noise_unchecked(tau)).max(0.0)
            }
            ProfileShape::PiecewiseLinear { knots } => interpolate(knots, tau),
        }
    }

    /// Interior points where the law has a kink.
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            ProfileShape::WaterFilling { cutoff, .. } => vec![*cutoff],
            ProfileShape::PiecewiseLinear { knots } => knots.iter().map(|k| k.0).collect(),
            _ => Vec::new(),
        }
    }
}

/// Stationary power of the log-utility Lagrangian.
///
/// With `w = W0(z)`, `z = 1/(lambda N)` we have `N = 1/(lambda w e^w)`, so
/// `1/(lambda w) - N` equals `(1 - e^{-w}) / (lambda w)`. The second form has
/// no cancellation when `N` dwarfs the result.
pub(crate) fn pf_power(inv_lambda: f64, noise: f64) -> f64 {
    let w = lambert_w0_unchecked(inv_lambda / noise);
    if w == 0.0 {
        return inv_lambda;
    }
    inv_lambda * (-(-w).exp_m1()) / w
}

fn interpolate(knots: &[(f64, f64)], tau: f64) -> f64 {
    match knots.iter().position(|&(t, _)| t >= tau) {
        None => knots.last().map_or(0.0, |k| k.1),
        Some(0) => knots[0].1,
        Some(i) => {
            let (t0, p0) = knots[i - 1];
            let (t1, p1) = knots[i];
            p0 + (p1 - p0) * (tau - t0) / (t1 - t0)
        }
    }
}

/// A sampled power allocation over `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerProfile {
    scheme: Scheme,
    shape: ProfileShape,
    times: Vec<f64>,
    powers: Vec<f64>,
}

impl PowerProfile {
    /// Samples `shape` on `grid_points` uniform times plus any breakpoints.
    pub fn sample(s: &Scenario, scheme: Scheme, shape: ProfileShape, grid_points: usize) -> Self {
        let t = s.traversal_time();
        let mut times = uniform_times(t, grid_points);
        for b in shape.breakpoints() {
            if b > 0.0 && b < t && !times.contains(&b) {
                let at = times.partition_point(|&x| x < b);
                times.insert(at, b);
            }
        }
        let powers = times.iter().map(|&tau| shape.power_at(s, tau)).collect();
        Self {
            scheme,
            shape,
            times,
            powers,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn shape(&self) -> &ProfileShape {
        &self.shape
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn power_at(&self, s: &Scenario, tau: f64) -> f64 {
        self.shape.power_at(s, tau)
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        self.shape.breakpoints()
    }

    /// `k0` of a channel-inversion profile.
    pub fn inversion_ratio(&self) -> Option<f64> {
        match self.shape {
            ProfileShape::Inversion { k0 } => Some(k0),
            _ => None,
        }
    }

    /// Water level `W / lambda` of a water-filling profile, in watts.
    pub fn water_level(&self) -> Option<f64> {
        match self.shape {
            ProfileShape::WaterFilling { level, .. } => Some(level),
            _ => None,
        }
    }

    /// Time after which a water-filling profile transmits nothing.
    pub fn cutoff(&self) -> Option<f64> {
        match self.shape {
            ProfileShape::WaterFilling { cutoff, .. } => Some(cutoff),
            _ => None,
        }
    }

    /// Lagrange multiplier of either proportional-fair profile.
    pub fn lambda(&self) -> Option<f64> {
        match self.shape {
            ProfileShape::ProportionalFair { inv_lambda } => Some(1.0 / inv_lambda),
            _ => None,
        }
    }

    /// `\int_0^T P(tau) dtau`.
    pub fn energy(&self, s: &Scenario) -> Result<f64> {
        integrate_piecewise(
            |tau| self.power_at(s, tau),
            0.0,
            s.traversal_time(),
            &self.breakpoints(),
            DEFAULT_INTERVALS,
        )
    }

    pub fn mean_power(&self, s: &Scenario) -> Result<f64> {
        Ok(self.energy(s)? / s.traversal_time())
    }

    /// `(mean - avg_power) / avg_power`.
    pub fn mean_power_error(&self, s: &Scenario) -> Result<f64> {
        Ok((self.mean_power(s)? - s.avg_power) / s.avg_power)
    }
}

/// `points` uniformly spaced times on `[0, t]`, endpoints exact.
pub fn uniform_times(t: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => {
            let last = points - 1;
            (0..points)
                .map(|i| {
                    if i == last {
                        t
                    } else {
                        t * i as f64 / last as f64
                    }
                })
                .collect()
        }
    }
}
