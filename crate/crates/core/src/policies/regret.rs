use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};
use crate::model::Scenario;
use crate::state::ExperimentState;

/// SNR shortfall of a trajectory against always playing the best arm.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RegretMetrics {
    /// `Σ_t (z* - z_{g_t})`.
    pub regret: f64,
    /// Rounds spent on an arm with `z_{g_t} < z*`.
    pub mistakes: u64,
}

pub fn regret_metrics(state: &ExperimentState, truth: &Scenario) -> Result<RegretMetrics> {
    if truth.k != state.k() {
        return invalid_arg(format!("scenario has {} arms, state has {}", truth.k, state.k()));
    }
    let z = truth.snrs();
    let best = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out = RegretMetrics::default();
    for (g, n) in state.counts().into_iter().enumerate() {
        let gap = best - z[g];
        if gap > 0.0 {
            out.regret += gap * n as f64;
            out.mistakes += n;
        }
    }
    Ok(out)
}
