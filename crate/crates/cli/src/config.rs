//! The JSON run configuration and its resolution into an engine config.
//!
//! Keys are flat and unknown keys are rejected. The resolved form has every
//! field filled in, so writing it back out gives a file that reruns the
//! same experiment.

use std::f64::consts::SQRT_2;

use banditlab_core::boundary::Correction;
use banditlab_core::engine::{PooledParams, RunConfig, StatisticKind, DEFAULT_SEED};
use banditlab_core::policies::{PolicyConfig, PolicyKind, SnWidth};
use banditlab_core::stats::{default_lambda, PadForm};
use banditlab_core::ScenarioKind;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Environment variable consulted for the master seed when neither the
/// command line nor the config supplies one.
pub const SEED_ENV: &str = "BANDITLAB_SEED";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub scenario: ScenarioKind,
    pub k: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_zeta")]
    pub zeta: f64,
    #[serde(default = "default_policy")]
    pub policy: PolicyKind,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default = "default_ucb1_scale")]
    pub ucb1_scale: f64,
    #[serde(default)]
    pub sn_width: SnWidth,
    #[serde(default = "default_statistics")]
    pub statistics: Vec<StatisticKind>,
    /// Padding level; `null` means `sqrt(log(kT))`.
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default = "default_c_rho")]
    pub c_rho: f64,
    #[serde(default)]
    pub pad_form: PadForm,
    #[serde(default)]
    pub correction: Correction,
    #[serde(default)]
    pub early_stop: bool,
    #[serde(default = "default_reps")]
    pub reps: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
}

fn default_alpha() -> f64 {
    0.05
}
fn default_zeta() -> f64 {
    2.0
}
fn default_policy() -> PolicyKind {
    PolicyKind::Uniform
}
fn default_beta() -> f64 {
    2.1
}
fn default_nu() -> f64 {
    1.0
}
fn default_ucb1_scale() -> f64 {
    SQRT_2
}
fn default_statistics() -> Vec<StatisticKind> {
    vec![StatisticKind::PooledThr, StatisticKind::MaxLin, StatisticKind::MaxLog]
}
fn default_c_rho() -> f64 {
    1.0
}
fn default_reps() -> u64 {
    1000
}
fn default_parallelism() -> usize {
    1
}

impl CliConfig {
    /// Parses a config document, reporting the line and column of syntax or schema errors.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            let msg = full.strip_suffix(&suffix).unwrap_or(&full);
            CliError::Config(format!("line {}, column {}: {msg}", e.line(), e.column()))
        })
    }

    /// Fills in the seed (flag, then config, then environment, then the
    /// built-in default) and checks the result against the engine's rules.
    pub fn resolve(mut self, seed_flag: Option<u64>) -> Result<Self, CliError> {
        self.seed = Some(resolve_seed(seed_flag.or(self.seed))?);
        if self.lambda.is_none() && self.k >= 1 && self.horizon >= 1 {
            self.lambda = Some(default_lambda(self.k, self.horizon));
        }
        self.to_run_config()?.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(self)
    }

    pub fn to_run_config(&self) -> Result<RunConfig, CliError> {
        Ok(RunConfig {
            scenario: self.scenario,
            k: self.k,
            delta: self.delta,
            thresholds: self.thresholds.clone(),
            horizon: self.horizon,
            alpha: self.alpha,
            zeta: self.zeta,
            policy: PolicyConfig {
                kind: self.policy,
                beta: self.beta,
                nu: self.nu,
                ucb1_scale: self.ucb1_scale,
                sn_width: self.sn_width,
            },
            statistics: self.statistics.clone(),
            pooled: PooledParams { lambda: self.lambda, c_rho: self.c_rho, pad_form: self.pad_form },
            correction: self.correction,
            early_stop: self.early_stop,
            reps: self.reps,
            master_seed: match self.seed {
                Some(s) => s,
                None => resolve_seed(None)?,
            },
            parallelism: self.parallelism,
        })
    }
}

/// `explicit`, else `BANDITLAB_SEED`, else the built-in default.
pub fn resolve_seed(explicit: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = explicit {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_ENV}={v:?} is not an unsigned 64-bit integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}
