use crate::error::{Error, Result};
use crate::state::ArmAccumulator;

/// Value reported for a nonzero sum with zero spread.
///
/// All-equal nonzero samples are unbounded one-sided evidence for a
/// continuous family; callers see `±REJECT_SENTINEL` and any finite boundary
/// is crossed.
pub const REJECT_SENTINEL: f64 = f64::INFINITY;

/// Self-normalized sum `Σx / sqrt(Σ(x - x̄)²)` of one arm's draws.
///
/// Equals `sqrt(n) * mean / sd` (divisor `n`) whenever the spread is positive.
pub fn t_stat(acc: &ArmAccumulator) -> Result<f64> {
    if acc.n == 0 {
        return Err(Error::InvalidState("t-statistic of an arm with no draws".into()));
    }
    let css = acc.css();
    if css > 0.0 {
        Ok(acc.sum / css.sqrt())
    } else if acc.sum == 0.0 {
        Ok(0.0)
    } else {
        Ok(acc.sum.signum() * REJECT_SENTINEL)
    }
}
