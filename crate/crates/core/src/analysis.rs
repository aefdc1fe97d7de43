//! Efficiency and fairness metrics, and the proportional-fairness criterion.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::allocators::{
    allocate, uniform_times, PowerProfile, ProfileShape, Scheme, SolverSettings,
};
use crate::channel::{channel_service, Scenario};
use crate::error::{Error, Result};
use crate::numerics::{integrate_piecewise, DEFAULT_INTERVALS};

/// Knots in the piecewise-linear competitors from [`random_feasible_profile`].
pub const RANDOM_PROFILE_KNOTS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeMetrics {
    pub scheme: Scheme,
    /// `S(T)` in nats.
    pub total_service: f64,
    /// `\int_0^T ln C(tau) dtau`, `-inf` when the rate vanishes somewhere.
    pub pf_utility: f64,
    pub min_rate: f64,
    pub max_rate: f64,
    /// Standard deviation over mean of the sampled rates.
    pub rate_cv: f64,
    pub mean_power_error: f64,
    /// False only for a multiplier search that ran out of iterations.
    pub converged: bool,
}

/// `\int_0^T ln C(tau) dtau`; `-inf` if any quadrature node has zero capacity.
pub fn pf_utility(s: &Scenario, profile: &PowerProfile) -> Result<f64> {
    let result = integrate_piecewise(
        |tau| s.capacity_unchecked(profile.power_at(s, tau), tau).ln(),
        0.0,
        s.traversal_time(),
        &profile.breakpoints(),
        DEFAULT_INTERVALS,
    );
    match result {
        Err(Error::NonFinite { value, .. }) if value == f64::NEG_INFINITY => Ok(f64::NEG_INFINITY),
        other => other,
    }
}

/// `\int_0^T (C_q - C_p) / C_p dtau`. Nonpositive for every feasible `q` iff
/// `p` is proportionally fair along time.
pub fn pf_criterion_gap(s: &Scenario, p: &PowerProfile, q: &PowerProfile) -> Result<f64> {
    let mut breaks = p.breakpoints();
    breaks.extend(q.breakpoints());
    let result = integrate_piecewise(
        |tau| {
            let cp = s.capacity_unchecked(p.power_at(s, tau), tau);
            let cq = s.capacity_unchecked(q.power_at(s, tau), tau);
            (cq - cp) / cp
        },
        0.0,
        s.traversal_time(),
        &breaks,
        DEFAULT_INTERVALS,
    );
    match result {
        Err(Error::NonFinite { abscissa, .. }) => Err(Error::ZeroCapacity { tau: abscissa }),
        other => other,
    }
}

/// A seeded piecewise-linear allocation that spends exactly the budget.
///
/// Knot values are uniform on `[0, 1)` at equally spaced times, then scaled so
/// the (exact, trapezoidal) energy equals `avg_power * T`.
pub fn random_feasible_profile(s: &Scenario, seed: u64) -> Result<PowerProfile> {
    s.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = s.traversal_time();
    let times = uniform_times(t, RANDOM_PROFILE_KNOTS);
    let values: Vec<f64> = times.iter().map(|_| rng.random::<f64>()).collect();

    let energy: f64 = times
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum();
    let scale = s.energy_budget() / energy;
    let knots = times
        .into_iter()
        .zip(values)
        .map(|(t, v)| (t, v * scale))
        .collect();
    Ok(PowerProfile::sample(
        s,
        Scheme::RandomFeasible,
        ProfileShape::PiecewiseLinear { knots },
        SolverSettings::default().grid_points,
    ))
}

pub fn scheme_metrics(
    s: &Scenario,
    profile: &PowerProfile,
    converged: bool,
) -> Result<SchemeMetrics> {
    let rates: Vec<f64> = profile
        .times()
        .iter()
        .zip(profile.powers())
        .map(|(&tau, &p)| s.capacity(p, tau))
        .collect::<Result<_>>()?;
    let n = rates.len() as f64;
    let mean = rates.iter().sum::<f64>() / n;
    let var = rates.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n;
    Ok(SchemeMetrics {
        scheme: profile.scheme(),
        total_service: channel_service(s, profile, s.traversal_time())?,
        pf_utility: pf_utility(s, profile)?,
        min_rate: rates.iter().copied().fold(f64::INFINITY, f64::min),
        max_rate: rates.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        rate_cv: var.sqrt() / mean,
        mean_power_error: profile.mean_power_error(s)?,
        converged,
    })
}

/// Metrics for all five schemes, in [`Scheme::ALL`] order.
pub fn compare_schemes(s: &Scenario, settings: &SolverSettings) -> Result<Vec<SchemeMetrics>> {
    Scheme::ALL
        .into_iter()
        .map(|scheme| {
            let a = allocate(s, scheme, settings)?;
            scheme_metrics(s, &a.profile, a.converged())
        })
        .collect()
}
