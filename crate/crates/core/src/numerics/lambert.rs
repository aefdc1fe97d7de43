//! Principal branch of the Lambert W function on the nonnegative reals.

use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 64;

/// Solves `w * exp(w) = z` for `w >= 0` given `z >= 0`.
///
/// Halley iteration seeded by the small-argument series below `z = 0.1`,
/// `ln(1 + z)` on `[0.1, e]` and the asymptotic `ln z - ln ln z` above `e`.
pub fn lambert_w0(z: f64) -> Result<f64> {
    if z.is_nan() || z < 0.0 || z.is_infinite() {
        return Err(Error::OutOfDomain {
            what: "lambert_w0 argument",
            value: z,
            lower: 0.0,
            upper: f64::MAX,
        });
    }
    Ok(lambert_w0_unchecked(z))
}

pub(crate) fn lambert_w0_unchecked(z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    if z < 1e-8 {
        // w = z - z^2 + 3/2 z^3 - ...; the cubic term is already below 1 ulp.
        return z - z * z;
    }

    let mut w = initial_guess(z);
    for _ in 0..MAX_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - z;
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        let converged = (next - w).abs() <= 4.0 * f64::EPSILON * next.abs().max(1.0);
        w = next;
        if converged {
            break;
        }
    }
    w
}

fn initial_guess(z: f64) -> f64 {
    if z < 0.1 {
        z * (1.0 - z * (1.0 - 1.5 * z))
    } else if z <= E {
        z.ln_1p()
    } else {
        let l1 = z.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    }
}
