//! Independent oracles and fixtures shared by the integration tests.

#![allow(dead_code)]

use hsr_power::allocators::calibrate_noise;
use hsr_power::channel::{dbw_to_watts, kmh_to_mps};
use hsr_power::{Deployment, Scenario};

pub fn reference_deployment(avg_power_dbw: f64) -> Deployment {
    Deployment {
        bandwidth: 5e6,
        avg_power: dbw_to_watts(avg_power_dbw),
        d0: 100.0,
        cell_radius: 2500.0,
        velocity: kmh_to_mps(300.0),
        pathloss_exp: 4.0,
    }
}

/// Noise density calibrated to a 10.4 s water-filling cutoff at 5 dBW.
pub fn reference_noise_psd() -> f64 {
    calibrate_noise(&reference_deployment(5.0), 10.4).unwrap()
}

/// The 5 or 15 dBW scenario, both on the 5 dBW calibration.
pub fn reference_scenario(avg_power_dbw: f64) -> Scenario {
    reference_deployment(avg_power_dbw)
        .with_noise_psd(reference_noise_psd())
        .unwrap()
}

pub const REFERENCE_CONFIG: &str = r#"[scenario]
bandwidth_mhz = 5.0
avg_power_dbw = 5.0
d0_m = 100.0
cell_radius_km = 2.5
velocity_kmh = 300.0
pathloss_exp = 4.0
target_cutoff_s = 10.4

[solver]
lambda_step_init = 0.01
power_ratio_tol = 0.001
max_iterations = 10000
grid_points = 2048
"#;

/// Lambert W by safeguarded Newton on `w e^w - z`, bracketed in `[0, max(1, ln(1 + z))]`.
pub fn lambert_oracle(z: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, (1.0 + z).ln().max(1.0));
    let mut w = 0.5 * (lo + hi);
    for _ in 0..200 {
        let f = w * w.exp() - z;
        if f > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        let newton = w - f / ((w + 1.0) * w.exp());
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - w).abs() <= 1e-14 * w.max(1e-300) {
            return next;
        }
        w = next;
    }
    w
}

/// `\int_0^t (d0^2 + v^2 tau^2)^2 dtau`.
pub fn quartic_distance_integral(d0: f64, v: f64, t: f64) -> f64 {
    d0.powi(4) * t + 2.0 * d0 * d0 * v * v * t.powi(3) / 3.0 + v.powi(4) * t.powi(5) / 5.0
}

/// Discretized proportional-fair problem solved by projected gradient ascent.
pub struct ConvexOracle {
    pub times: Vec<f64>,
    pub noise: Vec<f64>,
    pub dt: f64,
    pub bandwidth: f64,
    pub budget: f64,
    /// Multiplies every capacity, e.g. `1/ln 2` for bits.
    pub rate_scale: f64,
}

pub struct OracleSolution {
    pub powers: Vec<f64>,
    pub iterations: usize,
    pub gradient_mapping_norm: f64,
}

impl ConvexOracle {
    /// Midpoint grid of `points` cells on `[0, T]`.
    pub fn new(s: &Scenario, points: usize, rate_scale: f64) -> Self {
        let t = s.traversal_time();
        let dt = t / points as f64;
        let times: Vec<f64> = (0..points).map(|i| (i as f64 + 0.5) * dt).collect();
        let noise = times
            .iter()
            .map(|&tau| s.noise_power(tau).unwrap())
            .collect();
        Self {
            times,
            noise,
            dt,
            bandwidth: s.bandwidth,
            budget: s.energy_budget(),
            rate_scale,
        }
    }

    /// `sum ln(scale * W ln(1 + P_i / N_i)) dt`.
    pub fn utility(&self, powers: &[f64]) -> f64 {
        powers
            .iter()
            .zip(&self.noise)
            .map(|(&p, &n)| {
                let c = self.rate_scale * self.bandwidth * (p / n).ln_1p();
                if c > 0.0 {
                    c.ln() * self.dt
                } else {
                    f64::NEG_INFINITY
                }
            })
            .sum()
    }

    fn gradient(&self, powers: &[f64]) -> Vec<f64> {
        powers
            .iter()
            .zip(&self.noise)
            .map(|(&p, &n)| self.dt / ((p / n).ln_1p() * (p + n)))
            .collect()
    }

    /// Euclidean projection onto `{x >= 0, sum x dt = budget}`.
    fn project(&self, y: &[f64]) -> Vec<f64> {
        let total = self.budget / self.dt;
        let mut sorted = y.to_vec();
        sorted.sort_by(|a, b| b.total_cmp(a));
        let mut cumulative = 0.0;
        let mut shift = 0.0;
        for (k, &u) in sorted.iter().enumerate() {
            cumulative += u;
            let candidate = (cumulative - total) / (k + 1) as f64;
            if u - candidate > 0.0 {
                shift = candidate;
            }
        }
        y.iter().map(|&v| (v - shift).max(0.0)).collect()
    }

    fn mapping_norm(&self, x: &[f64], g: &[f64]) -> f64 {
        let y: Vec<f64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
        let p = self.project(&y);
        x.iter()
            .zip(&p)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Projected gradient ascent with step `1 / max_i H_ii`, halved while any
    /// power would drop below half its current value. The Hessian is diagonal,
    /// so this bounds the local curvature without comparing utilities, whose
    /// changes near the optimum fall below rounding.
    pub fn solve(&self, tol: f64, max_iterations: usize) -> OracleSolution {
        let n = self.times.len();
        let mut x = vec![self.budget / (self.dt * n as f64); n];
        let mut norm = f64::INFINITY;
        for it in 0..max_iterations {
            let g = self.gradient(&x);
            norm = self.mapping_norm(&x, &g);
            if norm <= tol {
                return OracleSolution {
                    powers: x,
                    iterations: it,
                    gradient_mapping_norm: norm,
                };
            }
            let mut step = 1.0 / self.curvature(&x).into_iter().fold(0.0, f64::max);
            x = loop {
                let y: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
                let cand = self.project(&y);
                if cand.iter().zip(&x).all(|(c, a)| *c >= 0.5 * a) {
                    break cand;
                }
                step *= 0.5;
            };
        }
        OracleSolution {
            powers: x,
            iterations: max_iterations,
            gradient_mapping_norm: norm,
        }
    }

    /// Negated Hessian diagonal of the utility.
    fn curvature(&self, powers: &[f64]) -> Vec<f64> {
        powers
            .iter()
            .zip(&self.noise)
            .map(|(&p, &n)| {
                let c = (p / n).ln_1p();
                self.dt * (1.0 + 1.0 / c) / (c * (p + n).powi(2))
            })
            .collect()
    }
}

/// Collects named pass/fail lines for one acceptance criterion.
pub struct Criterion {
    id: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    pub fn new(id: &'static str) -> Self {
        Self {
            id,
            failures: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("[{tag}] {} {name}: {detail}", self.id);
        if !ok {
            self.failures.push(name.to_owned());
        }
    }

    pub fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "{} failed checks: {:?}",
            self.id,
            self.failures
        );
    }
}
