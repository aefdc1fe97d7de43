//! Power allocation schemes over one cell traversal.

mod classic;
mod pf;
mod profile;
mod settings;

pub use classic::{calibrate_noise, constant_pa, inversion_pa, waterfilling_pa, NOISE_PSD_BRACKET};
pub use pf::{
    approximate_inverse_multiplier, pf_epsilon_optimal_pa, pf_near_optimal_pa,
    total_power_for_lambda, LambdaEnergy,
};
pub use profile::{uniform_times, PowerProfile, ProfileShape, Scheme};
pub use settings::{SolveReport, SolverSettings, TraceEntry};

use crate::channel::Scenario;
use crate::error::Result;

/// Result of running one scheme; only the epsilon-optimal search carries a report.
#[derive(Debug, Clone)]
pub struct Allocation {
    pub profile: PowerProfile,
    pub report: Option<SolveReport>,
}

impl Allocation {
    pub fn converged(&self) -> bool {
        self.report.as_ref().is_none_or(|r| r.converged)
    }
}

pub fn allocate(s: &Scenario, scheme: Scheme, settings: &SolverSettings) -> Result<Allocation> {
    let profile = match scheme {
        Scheme::Constant => constant_pa(s, settings)?,
        Scheme::Inversion => inversion_pa(s, settings)?,
        Scheme::WaterFilling => waterfilling_pa(s, settings)?,
        Scheme::PfNearOptimal => pf_near_optimal_pa(s, settings)?,
        Scheme::PfEpsilonOptimal => {
            let (profile, report) = pf_epsilon_optimal_pa(s, settings)?;
            return Ok(Allocation {
                profile,
                report: Some(report),
            });
        }
        Scheme::RandomFeasible => {
            return Err(crate::error::Error::Config(
                "random_feasible is not an allocation scheme".into(),
            ))
        }
    };
    Ok(Allocation {
        profile,
        report: None,
    })
}
