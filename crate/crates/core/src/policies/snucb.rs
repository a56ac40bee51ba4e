use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::state::ArmAccumulator;
use crate::stats::t_stat;

/// Width multiplier applied to the exploration bonus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SnWidth {
    /// `(1 + r) τ` with `r = Ẑ / sqrt(n)`; shrinks for negative `r`.
    #[default]
    Signed,
    /// `(1 + 2|r|) τ`, never below `τ`.
    Absolute,
}

/// Exploration bonus `4 ν² sqrt(β log(4t) / n)`.
pub fn exploration_tau(n: u64, t: usize, beta: f64, nu: f64) -> f64 {
    4.0 * nu * nu * (beta * (4.0 * t as f64).ln() / n as f64).sqrt()
}

/// Optimistic SNR index of one arm at round `t`.
pub fn sn_ucb_value(acc: &ArmAccumulator, t: usize, beta: f64, nu: f64, width: SnWidth) -> Result<f64> {
    let r = t_stat(acc)? / (acc.n as f64).sqrt();
    let tau = exploration_tau(acc.n, t, beta, nu);
    Ok(match width {
        SnWidth::Signed => r + (1.0 + r) * tau,
        SnWidth::Absolute => r + (1.0 + 2.0 * r.abs()) * tau,
    })
}
