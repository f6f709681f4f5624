//! Bracketing root finders.

use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BisectOutcome {
    /// `|f(x)| <= tol` was reached.
    Root(f64),
    /// The bracket shrank to rounding level without meeting the residual
    /// tolerance: `f` jumps across zero there instead of crossing it.
    Collapsed { at: f64, value: f64 },
}

/// Bisection on a residual tolerance. `f_lo = f(lo)` must differ in sign
/// from `f(hi)`.
pub fn bisect<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    tol: f64,
    max_iter: usize,
) -> Result<BisectOutcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    if f_lo.abs() <= tol {
        return Ok(BisectOutcome::Root(lo));
    }
    let mut mid = 0.5 * (lo + hi);
    let mut f_mid = f_lo;
    for _ in 0..max_iter {
        mid = 0.5 * (lo + hi);
        f_mid = f(mid)?;
        if f_mid.abs() <= tol {
            return Ok(BisectOutcome::Root(mid));
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
            break;
        }
    }
    Ok(BisectOutcome::Collapsed {
        at: mid,
        value: f_mid,
    })
}

/// Bisection to an abscissa tolerance for a continuous `f` with a sign
/// change on `[lo, hi]`.
pub fn bisect_interval<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return lo;
    }
    while hi - lo > xtol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
