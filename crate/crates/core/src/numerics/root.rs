use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 2000;

/// Bisection on a monotone `g` over `[lo, hi]` until the bracket is at most
/// `tol` wide.
///
/// Returns whichever final bracket endpoint has the smaller `|g|`.
pub fn find_root_monotone<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            field: "root tolerance",
            value: tol,
            reason: "must be positive",
        });
    }
    let (mut lo, mut hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut g_lo = g(lo);
    let mut g_hi = g(hi);
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if !(g_lo.is_finite() && g_hi.is_finite()) || g_lo.signum() == g_hi.signum() {
        return Err(Error::NotBracketed { lo, hi, g_lo, g_hi });
    }

    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
            g_hi = g_mid;
        }
    }
    Ok(if g_lo.abs() <= g_hi.abs() { lo } else { hi })
}
