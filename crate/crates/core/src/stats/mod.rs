//! Test statistics: pooled sums, per-arm t-statistics and max-test monitors.
//!
//! The pooled statistics are compared with the one-sided normal quantile
//! [`pooled_critical`]; the monitors carry their own boundary.

mod monitor;
mod pooled;
mod tstat;

pub use monitor::{Rejection, SequentialMonitor};
pub use pooled::{
    default_lambda, drift, infeasible_pooled, log_kt, pooled, pooled_centered,
    pooled_over_drawn, PadForm, PooledConfig,
    PooledVariant,
};
pub use tstat::{t_stat, REJECT_SENTINEL};

use crate::boundary::norm_quantile;

/// `Φ⁻¹(1 - α)`, the rejection threshold for every pooled statistic.
pub fn pooled_critical(alpha: f64) -> f64 {
    -norm_quantile(alpha)
}
