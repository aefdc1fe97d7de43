use crate::error::{Error, Result};

/// Knobs for the allocators and the multiplier search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Initial step applied to `1/lambda`, in watts.
    pub lambda_step_init: f64,
    /// Largest acceptable `|P_lambda / (avg_power * T) - 1|`.
    pub power_ratio_tol: f64,
    pub max_iterations: usize,
    /// Samples in each returned profile.
    pub grid_points: usize,
    /// Bracket width for time-domain root finding, in seconds. `None` means `1e-10 * T`.
    pub root_tol: Option<f64>,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            lambda_step_init: 0.01,
            power_ratio_tol: 0.001,
            max_iterations: 10_000,
            grid_points: 2048,
            root_tol: None,
        }
    }
}

impl SolverSettings {
    pub fn with_grid_points(mut self, grid_points: usize) -> Self {
        self.grid_points = grid_points;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda_step_init > 0.0 && self.lambda_step_init.is_finite()) {
            return Err(invalid(
                "lambda_step_init",
                self.lambda_step_init,
                "must be positive",
            ));
        }
        if !(self.power_ratio_tol > 0.0 && self.power_ratio_tol < 1.0) {
            return Err(invalid(
                "power_ratio_tol",
                self.power_ratio_tol,
                "must lie in (0, 1)",
            ));
        }
        if self.max_iterations < 1 {
            return Err(invalid("max_iterations", 0.0, "must be at least 1"));
        }
        if self.grid_points < 2 {
            return Err(invalid(
                "grid_points",
                self.grid_points as f64,
                "must be at least 2",
            ));
        }
        if let Some(tol) = self.root_tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(invalid("root_tol", tol, "must be positive"));
            }
        }
        Ok(())
    }

    pub fn root_tol_for(&self, traversal_time: f64) -> f64 {
        self.root_tol.unwrap_or(1e-10 * traversal_time)
    }
}

fn invalid(field: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        field,
        value,
        reason,
    }
}

/// One accepted step of the multiplier search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub lambda: f64,
    /// `r_dP = P_lambda / (avg_power * T) - 1` at this `lambda`.
    pub power_ratio: f64,
}

/// Outcome of the epsilon-optimal multiplier search.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub lambda_final: f64,
    pub iterations: usize,
    pub final_power_ratio: f64,
    pub converged: bool,
    /// Entry 0 is the starting multiplier; guarded retries add no entry.
    pub lambda_trajectory: Vec<TraceEntry>,
}
