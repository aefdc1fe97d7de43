//! Proportional-fair allocation along time.
//!
//! Maximizing `\int ln C(tau)` under the energy budget gives the stationary
//! power `P = 1/(lambda W0(1/(lambda N))) - N`. The closed-form multiplier
//! below fixes `P(T) = avg_power`; the adaptive search then moves `1/lambda`
//! until the budget is met to within `power_ratio_tol`.

use crate::channel::Scenario;
use crate::error::Result;
use crate::numerics::{integrate_piecewise, DEFAULT_INTERVALS};

use super::profile::pf_power;
use super::{PowerProfile, ProfileShape, Scheme, SolveReport, SolverSettings, TraceEntry};

/// `1/lambda = (avg_power + N(T)) ln(1 + avg_power / N(T))`.
pub fn approximate_inverse_multiplier(s: &Scenario) -> f64 {
    let edge_noise = s.noise_unchecked(s.traversal_time());
    (s.avg_power + edge_noise) * (s.avg_power / edge_noise).ln_1p()
}

pub fn pf_near_optimal_pa(s: &Scenario, settings: &SolverSettings) -> Result<PowerProfile> {
    s.validate()?;
    settings.validate()?;
    Ok(PowerProfile::sample(
        s,
        Scheme::PfNearOptimal,
        ProfileShape::ProportionalFair {
            inv_lambda: approximate_inverse_multiplier(s),
        },
        settings.grid_points,
    ))
}

/// Energy spent by the stationary profile at a given multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEnergy {
    /// `\int_0^T P(tau) dtau` in joules.
    pub energy: f64,
    /// Quadrature nodes where the stationary power came out negative and was clamped to 0.
    pub clamped_nodes: usize,
}

pub fn total_power_for_lambda(s: &Scenario, lambda: f64) -> Result<LambdaEnergy> {
    energy_at_inverse(s, 1.0 / lambda)
}

fn energy_at_inverse(s: &Scenario, inv_lambda: f64) -> Result<LambdaEnergy> {
    let clamped = std::cell::Cell::new(0usize);
    let energy = integrate_piecewise(
        |tau| {
            let p = pf_power(inv_lambda, s.noise_unchecked(tau));
            if p < 0.0 {
                clamped.set(clamped.get() + 1);
                0.0
            } else {
                p
            }
        },
        0.0,
        s.traversal_time(),
        &[],
        DEFAULT_INTERVALS,
    )?;
    Ok(LambdaEnergy {
        energy,
        clamped_nodes: clamped.get(),
    })
}

fn sign(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Adaptive-step multiplier search started from the closed-form multiplier.
///
/// Each pass steps `1/lambda` by `-sign(r) * step` where
/// `r = P_lambda / (avg_power * T) - 1`, doubles the step while `r` keeps its
/// sign and divides it by 7 once `r` changes sign. A step that would make
/// `1/lambda` nonpositive is halved instead and counts as an iteration.
/// Running out of iterations is reported, not raised.
pub fn pf_epsilon_optimal_pa(
    s: &Scenario,
    settings: &SolverSettings,
) -> Result<(PowerProfile, SolveReport)> {
    s.validate()?;
    settings.validate()?;
    let budget = s.energy_budget();
    let ratio = |inv: f64| -> Result<f64> { Ok(energy_at_inverse(s, inv)?.energy / budget - 1.0) };

    let mut inv_lambda = approximate_inverse_multiplier(s);
    let mut step = settings.lambda_step_init;
    let mut r = ratio(inv_lambda)?;
    let mut iterations = 0;
    let mut trajectory = vec![TraceEntry {
        iteration: 0,
        lambda: 1.0 / inv_lambda,
        power_ratio: r,
    }];

    while r.abs() > settings.power_ratio_tol && iterations < settings.max_iterations {
        iterations += 1;
        let direction = sign(r);
        let next = inv_lambda - direction * step;
        if next <= 0.0 {
            step /= 2.0;
            continue;
        }
        inv_lambda = next;
        r = ratio(inv_lambda)?;
        if sign(r) * direction > 0.0 {
            step *= 2.0;
        } else {
            step /= 7.0;
        }
        trajectory.push(TraceEntry {
            iteration: iterations,
            lambda: 1.0 / inv_lambda,
            power_ratio: r,
        });
    }

    let report = SolveReport {
        lambda_final: 1.0 / inv_lambda,
        iterations,
        final_power_ratio: r,
        converged: r.abs() <= settings.power_ratio_tol,
        lambda_trajectory: trajectory,
    };
    let profile = PowerProfile::sample(
        s,
        Scheme::PfEpsilonOptimal,
        ProfileShape::ProportionalFair { inv_lambda },
        settings.grid_points,
    );
    Ok((profile, report))
}
