//! Allocation rules, the SNR confidence bound and regret accounting.
//!
//! Every policy except the oracle opens with the same initialization phase,
//! drawing arms `1, 1, 2, 2, ..., k, k`, so each arm has a defined spread
//! before any index is computed. The oracle needs the true scenario and
//! always plays the arm with the largest SNR.

mod confidence;
mod regret;
mod snucb;

use std::fmt;
use std::str::FromStr;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::model::{argmax, Scenario};
use crate::rng::standard_normal;
use crate::state::ExperimentState;

pub use confidence::{snr_confidence, SnrConfidenceBound};
pub use regret::{regret_metrics, RegretMetrics};
pub use snucb::{exploration_tau, sn_ucb_value, SnWidth};

/// Floor on the Thompson posterior variance, so degenerate samples still explore.
pub const THOMPSON_VAR_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Uniform,
    Ucb1,
    Thompson,
    SnUcb,
    Oracle,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] =
        [PolicyKind::SnUcb, PolicyKind::Ucb1, PolicyKind::Thompson, PolicyKind::Oracle, PolicyKind::Uniform];

    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::Uniform => "uniform",
            PolicyKind::Ucb1 => "ucb1",
            PolicyKind::Thompson => "thompson",
            PolicyKind::SnUcb => "sn_ucb",
            PolicyKind::Oracle => "oracle",
        }
    }

    pub fn uses_init_phase(self) -> bool {
        self != PolicyKind::Oracle
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(PolicyKind::Uniform),
            "ucb1" | "ucb" => Ok(PolicyKind::Ucb1),
            "thompson" => Ok(PolicyKind::Thompson),
            "sn_ucb" | "sn-ucb" | "snucb" => Ok(PolicyKind::SnUcb),
            "oracle" => Ok(PolicyKind::Oracle),
            other => invalid_arg(format!(
                "unknown policy `{other}` (expected uniform, ucb1, thompson, sn_ucb or oracle)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub kind: PolicyKind,
    /// SN-UCB exploration exponent; must exceed 2.
    pub beta: f64,
    /// Sub-Gaussian proxy.
    pub nu: f64,
    /// Bonus multiplier for UCB1.
    pub ucb1_scale: f64,
    pub sn_width: SnWidth,
}

impl PolicyConfig {
    pub fn new(kind: PolicyKind) -> Self {
        Self { kind, beta: 2.1, nu: 1.0, ucb1_scale: std::f64::consts::SQRT_2, sn_width: SnWidth::Signed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == PolicyKind::SnUcb && !(self.beta > 2.0 && self.beta.is_finite()) {
            return invalid_arg(format!("SN-UCB needs beta > 2, got {}", self.beta));
        }
        if !(self.nu >= 1.0 && self.nu.is_finite()) {
            return invalid_arg(format!("nu must be finite and >= 1, got {}", self.nu));
        }
        if !(self.ucb1_scale >= 0.0 && self.ucb1_scale.is_finite()) {
            return invalid_arg(format!("ucb1_scale must be finite and >= 0, got {}", self.ucb1_scale));
        }
        Ok(())
    }
}

/// Arm to draw in round `state.t() + 1`.
///
/// Uses only what `state` has recorded so far. `truth` is required by the
/// oracle and ignored otherwise; Uniform and Thompson consume `rng`
/// (one integer, or `k` normals in arm order).
pub fn select_arm(
    cfg: &PolicyConfig,
    state: &ExperimentState,
    truth: Option<&Scenario>,
    rng: &mut impl RngCore,
) -> Result<usize> {
    if cfg.kind == PolicyKind::Oracle {
        let truth = truth.ok_or_else(|| Error::InvalidArgument("oracle policy needs the true scenario".into()))?;
        if truth.k != state.k() {
            return invalid_arg(format!("scenario has {} arms, state has {}", truth.k, state.k()));
        }
        return Ok(truth.best_arm());
    }
    if let Some(arm) = state.init_arm() {
        return Ok(arm);
    }
    let t = state.t() + 1;
    let accs = state.accumulators();
    match cfg.kind {
        PolicyKind::Uniform => Ok(rng.random_range(0..state.k())),
        PolicyKind::Ucb1 => {
            let log_t = (t as f64).ln();
            Ok(argmax(accs.iter().map(|a| {
                let n = a.n as f64;
                a.sum / n + cfg.ucb1_scale * (log_t / n).sqrt()
            })))
        }
        PolicyKind::Thompson => {
            let draws: Vec<f64> = accs
                .iter()
                .map(|a| {
                    let n = a.n as f64;
                    let var = a.variance().unwrap_or(0.0).max(THOMPSON_VAR_FLOOR);
                    a.sum / n + (var / n).sqrt() * standard_normal(rng)
                })
                .collect();
            Ok(argmax(draws))
        }
        PolicyKind::SnUcb => {
            let values = accs
                .iter()
                .map(|a| sn_ucb_value(a, t, cfg.beta, cfg.nu, cfg.sn_width))
                .collect::<Result<Vec<_>>>()?;
            Ok(argmax(values))
        }
        PolicyKind::Oracle => unreachable!("handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{draw, make_scenario, ScenarioKind};
    use crate::rng::SimRng;
    use rand::SeedableRng;

    /// Plays `cfg` on `truth` for `horizon` rounds, with per-arm output scaling.
    fn play(cfg: &PolicyConfig, truth: &Scenario, horizon: usize, scale: &[f64], seed: u64) -> Vec<usize> {
        let mut rng = SimRng::seed_from_u64(seed);
        let mut data = SimRng::seed_from_u64(seed ^ 0xFFFF);
        let mut s = ExperimentState::new(truth.k, horizon).unwrap();
        while !s.is_finished() {
            let g = select_arm(cfg, &s, Some(truth), &mut rng).unwrap();
            let x = draw(&truth.arms[g], &mut data);
            s.record(g, scale[g] * x).unwrap();
        }
        s.choices().collect()
    }

    #[test]
    fn init_phase_is_paired_round_robin() {
        let truth = make_scenario(ScenarioKind::Multiscale, 4, 0.3).unwrap();
        let expected = [0, 0, 1, 1, 2, 2, 3, 3];
        for kind in [PolicyKind::Uniform, PolicyKind::Ucb1, PolicyKind::Thompson, PolicyKind::SnUcb] {
            let choices = play(&PolicyConfig::new(kind), &truth, 30, &[1.0; 4], 3);
            assert_eq!(&choices[..8], &expected, "{kind}");
        }
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let mut s = ExperimentState::new(2, 10).unwrap();
        for (g, x) in [(0, 1.0), (0, 2.0), (1, 1.0), (1, 2.0)] {
            s.record(g, x).unwrap();
        }
        let mut rng = SimRng::seed_from_u64(0);
        for kind in [PolicyKind::SnUcb, PolicyKind::Ucb1] {
            assert_eq!(select_arm(&PolicyConfig::new(kind), &s, None, &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn oracle_plays_best_snr() {
        let truth = make_scenario(ScenarioKind::Multiscale, 3, 0.5).unwrap();
        let snr = truth.snrs();
        assert!((snr[1] - 0.353_553_390_593_273_7).abs() < 1e-12);
        assert!((snr[2] - 0.288_675_134_594_812_9).abs() < 1e-12);
        let choices = play(&PolicyConfig::new(PolicyKind::Oracle), &truth, 25, &[1.0; 3], 1);
        assert!(choices.iter().all(|&g| g == 0));
        let s = ExperimentState::new(3, 5).unwrap();
        let err = select_arm(&PolicyConfig::new(PolicyKind::Oracle), &s, None, &mut SimRng::seed_from_u64(0));
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn seeded_policies_replay() {
        let truth = make_scenario(ScenarioKind::Spike, 5, 0.5).unwrap();
        for kind in PolicyKind::ALL {
            let cfg = PolicyConfig::new(kind);
            assert_eq!(play(&cfg, &truth, 200, &[1.0; 5], 11), play(&cfg, &truth, 200, &[1.0; 5], 11));
        }
    }

    #[test]
    fn sn_ucb_ignores_per_arm_rescaling() {
        let truth = make_scenario(ScenarioKind::Multiscale, 4, 0.2).unwrap();
        for width in [SnWidth::Signed, SnWidth::Absolute] {
            let cfg = PolicyConfig { sn_width: width, ..PolicyConfig::new(PolicyKind::SnUcb) };
            for seed in 0..5 {
                let base = play(&cfg, &truth, 400, &[1.0; 4], seed);
                assert_eq!(base, play(&cfg, &truth, 400, &[4.0, 0.25, 8.0, 2.0], seed));
            }
        }
    }

    #[test]
    fn beta_must_exceed_two() {
        let cfg = PolicyConfig { beta: 2.0, ..PolicyConfig::new(PolicyKind::SnUcb) };
        assert!(cfg.validate().is_err());
        assert!(PolicyConfig::new(PolicyKind::SnUcb).validate().is_ok());
        assert!(PolicyConfig { nu: 0.5, ..PolicyConfig::new(PolicyKind::Ucb1) }.validate().is_err());
    }

    #[test]
    fn labels_round_trip() {
        for kind in PolicyKind::ALL {
            assert_eq!(kind.label().parse::<PolicyKind>().unwrap(), kind);
        }
        assert!("greedy".parse::<PolicyKind>().is_err());
    }
}
