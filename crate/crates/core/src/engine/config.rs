use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boundary::Correction;
use crate::error::{invalid_arg, Error, Result};
use crate::model::ScenarioKind;
use crate::policies::{PolicyConfig, PolicyKind};
use crate::stats::{default_lambda, PadForm, PooledConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatisticKind {
    PooledPad,
    PooledThr,
    MaxLin,
    MaxLog,
    /// One-sided Student-t test at level α on the most-drawn arm.
    OracleT,
    /// One-sided Student-t test on every arm at level α/k; rejects if any arm does.
    BonferroniT,
}

impl StatisticKind {
    pub const ALL: [StatisticKind; 6] = [
        StatisticKind::PooledPad,
        StatisticKind::PooledThr,
        StatisticKind::MaxLin,
        StatisticKind::MaxLog,
        StatisticKind::OracleT,
        StatisticKind::BonferroniT,
    ];

    pub fn label(self) -> &'static str {
        match self {
            StatisticKind::PooledPad => "pooled_pad",
            StatisticKind::PooledThr => "pooled_thr",
            StatisticKind::MaxLin => "max_lin",
            StatisticKind::MaxLog => "max_log",
            StatisticKind::OracleT => "oracle_t",
            StatisticKind::BonferroniT => "bonferroni_t",
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatisticKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .map_or_else(|| invalid_arg(format!("unknown statistic `{s}`")), Ok)
    }
}

/// Regularization settings shared by both pooled statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PooledParams {
    /// Padding level; `None` means `sqrt(log(kT))`.
    pub lambda: Option<f64>,
    /// Trimming multiplier on `log(kT)`.
    pub c_rho: f64,
    pub pad_form: PadForm,
}

impl Default for PooledParams {
    fn default() -> Self {
        Self { lambda: None, c_rho: 1.0, pad_form: PadForm::InverseRoot }
    }
}

impl PooledParams {
    pub fn pad_config(&self, k: usize, horizon: usize) -> PooledConfig {
        PooledConfig {
            lambda: self.lambda.unwrap_or_else(|| default_lambda(k, horizon)),
            pad_form: self.pad_form,
            ..PooledConfig::pad(k, horizon)
        }
    }

    pub fn threshold_config(&self, k: usize, horizon: usize) -> PooledConfig {
        PooledConfig::threshold(k, horizon, self.c_rho)
    }
}

/// One simulation cell: scenario, policy, statistics and Monte Carlo settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scenario: ScenarioKind,
    pub k: usize,
    pub delta: f64,
    /// Per-arm thresholds; `None` tests every arm against 0.
    pub thresholds: Option<Vec<f64>>,
    pub horizon: usize,
    pub alpha: f64,
    pub zeta: f64,
    pub policy: PolicyConfig,
    pub statistics: Vec<StatisticKind>,
    pub pooled: PooledParams,
    pub correction: Correction,
    /// Stop as soon as the log-boundary max test rejects.
    pub early_stop: bool,
    pub reps: u64,
    pub master_seed: u64,
    /// Worker threads used by the Monte Carlo driver. Results do not depend on it.
    pub parallelism: usize,
}

pub const DEFAULT_SEED: u64 = 20_240_601;

impl RunConfig {
    pub fn new(scenario: ScenarioKind, k: usize, delta: f64, horizon: usize, policy: PolicyKind) -> Self {
        Self {
            scenario,
            k,
            delta,
            thresholds: None,
            horizon,
            alpha: 0.05,
            zeta: 2.0,
            policy: PolicyConfig::new(policy),
            statistics: vec![StatisticKind::PooledThr, StatisticKind::MaxLin, StatisticKind::MaxLog],
            pooled: PooledParams::default(),
            correction: Correction::Bonferroni,
            early_stop: false,
            reps: 1000,
            master_seed: DEFAULT_SEED,
            parallelism: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k < 1 {
            return invalid_arg("k must be at least 1");
        }
        if self.horizon < 2 * self.k {
            return invalid_arg(format!(
                "horizon T = {} is below 2k = {}: every arm must be drawn twice at the outset",
                self.horizon,
                2 * self.k
            ));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return invalid_arg(format!("delta must be finite and >= 0, got {}", self.delta));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return invalid_arg(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.zeta >= 1.0 && self.zeta.is_finite()) {
            return invalid_arg(format!("zeta must be finite and >= 1, got {}", self.zeta));
        }
        if self.reps < 1 {
            return invalid_arg("reps must be at least 1");
        }
        if self.parallelism < 1 {
            return invalid_arg("parallelism must be at least 1");
        }
        if self.statistics.is_empty() {
            return invalid_arg("at least one statistic is required");
        }
        if let Some(u) = &self.thresholds {
            if u.len() != self.k {
                return invalid_arg(format!("expected {} thresholds, got {}", self.k, u.len()));
            }
        }
        if let Some(lambda) = self.pooled.lambda {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return invalid_arg(format!("lambda must be positive and finite, got {lambda}"));
            }
        }
        if !(self.pooled.c_rho > 0.0 && self.pooled.c_rho.is_finite()) {
            return invalid_arg(format!("c_rho must be positive and finite, got {}", self.pooled.c_rho));
        }
        self.policy.validate()
    }
}
