//! Composite Simpson quadrature.

use crate::error::{Error, Result};

pub const DEFAULT_INTERVALS: usize = 4096;

/// An interval split into an even number of equal Simpson panels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureGrid {
    lower: f64,
    upper: f64,
    intervals: usize,
}

impl QuadratureGrid {
    pub fn new(lower: f64, upper: f64, intervals: usize) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(Error::InvalidParameter {
                field: "quadrature bounds",
                value: upper - lower,
                reason: "need finite lower < upper",
            });
        }
        if intervals < 2 || !intervals.is_multiple_of(2) {
            return Err(Error::InvalidParameter {
                field: "quadrature intervals",
                value: intervals as f64,
                reason: "must be even and at least 2",
            });
        }
        Ok(Self {
            lower,
            upper,
            intervals,
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn step(&self) -> f64 {
        (self.upper - self.lower) / self.intervals as f64
    }

    /// The `i`-th node; the last node is exactly `upper`.
    pub fn node(&self, i: usize) -> f64 {
        if i == self.intervals {
            self.upper
        } else {
            self.lower + i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.intervals).map(move |i| self.node(i))
    }

    /// Same interval with twice the panels.
    pub fn refined(&self) -> Self {
        Self {
            intervals: self.intervals * 2,
            ..*self
        }
    }
}

/// Composite Simpson estimate of the integral of `f` over `grid`.
pub fn integrate<F>(f: F, grid: &QuadratureGrid) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let n = grid.intervals();
    let mut ends = 0.0;
    let mut odd = 0.0;
    let mut even = 0.0;
    for i in 0..=n {
        let x = grid.node(i);
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFinite {
                abscissa: x,
                value: y,
            });
        }
        if i == 0 || i == n {
            ends += y;
        } else if i % 2 == 1 {
            odd += y;
        } else {
            even += y;
        }
    }
    Ok(grid.step() / 3.0 * (ends + 4.0 * odd + 2.0 * even))
}

/// Integrates over `[lower, upper]` with Simpson panels that never straddle a
/// point in `breaks`.
///
/// `intervals` is the panel budget for the whole range; each piece receives a
/// share proportional to its length, rounded up to an even count of at least 2.
pub fn integrate_piecewise<F>(
    f: F,
    lower: f64,
    upper: f64,
    breaks: &[f64],
    intervals: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if upper == lower {
        return Ok(0.0);
    }
    let span = upper - lower;
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lower && b < upper)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut total = 0.0;
    let mut a = lower;
    for b in cuts.into_iter().chain(std::iter::once(upper)) {
        if b > a {
            let grid = QuadratureGrid::new(a, b, piece_intervals(b - a, span, intervals))?;
            total += integrate(&f, &grid)?;
        }
        a = b;
    }
    Ok(total)
}

fn piece_intervals(len: f64, span: f64, budget: usize) -> usize {
    let raw = (budget as f64 * len / span).ceil() as usize;
    let even = raw + raw % 2;
    even.max(2)
}
