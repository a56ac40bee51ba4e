//! One replication: initialization, adaptive rounds, monitoring and the
//! end-of-experiment tests.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::boundary::{BoundaryKind, CritConfig};
use crate::error::{Error, Result};
use crate::model::{draw, make_scenario, Scenario};
use crate::policies::{regret_metrics, select_arm};
use crate::rng::replication_rng;
use crate::state::{ArmAccumulator, ExperimentState};
use crate::stats::{pooled_critical, pooled_over_drawn, PooledConfig, Rejection, SequentialMonitor};

use super::config::{RunConfig, StatisticKind};

/// Result of one statistic in one replication.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StatOutcome {
    pub statistic: StatisticKind,
    pub reject: bool,
    /// Test statistic at the end of the experiment; `None` for the max tests.
    pub value: Option<f64>,
    /// First boundary crossing, for the max tests.
    pub rejected_at: Option<Rejection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationResult {
    pub rep_index: u64,
    /// One entry per configured statistic, in configuration order.
    pub outcomes: Vec<StatOutcome>,
    pub regret: f64,
    pub mistakes: u64,
    pub pulls: Vec<u64>,
    /// Rounds actually played (the horizon unless stopped early).
    pub rounds: usize,
    pub stopped_at: Option<usize>,
}

impl ReplicationResult {
    pub fn outcome(&self, statistic: StatisticKind) -> Option<&StatOutcome> {
        self.outcomes.iter().find(|o| o.statistic == statistic)
    }
}

/// Everything about a configuration that is shared by its replications:
/// the scenario, critical values and tabulated monitor boundaries.
#[derive(Debug, Clone)]
pub struct Prepared {
    cfg: RunConfig,
    scenario: Scenario,
    pad: PooledConfig,
    thr: PooledConfig,
    pooled_crit: f64,
    monitors: Vec<(StatisticKind, SequentialMonitor)>,
    /// Position in `monitors` of the log monitor that triggers early stopping.
    stop_monitor: Option<usize>,
}

impl Prepared {
    pub fn new(cfg: &RunConfig) -> Result<Self> {
        cfg.validate()?;
        let mut scenario = make_scenario(cfg.scenario, cfg.k, cfg.delta)?;
        if let Some(u) = &cfg.thresholds {
            scenario = scenario.with_thresholds(u)?;
        }
        let crit = CritConfig::new(cfg.alpha, cfg.k, cfg.correction)?;
        let mut monitors = Vec::new();
        for &s in &cfg.statistics {
            let boundary = match s {
                StatisticKind::MaxLin => BoundaryKind::Linear,
                StatisticKind::MaxLog => BoundaryKind::Log,
                _ => continue,
            };
            if monitors.iter().all(|(kind, _)| *kind != s) {
                monitors.push((s, SequentialMonitor::new(boundary, &crit, cfg.horizon, cfg.zeta)?));
            }
        }
        let mut stop_monitor = None;
        if cfg.early_stop {
            let pos = monitors.iter().position(|(kind, _)| *kind == StatisticKind::MaxLog);
            stop_monitor = Some(match pos {
                Some(p) => p,
                None => {
                    let m = SequentialMonitor::new(BoundaryKind::Log, &crit, cfg.horizon, cfg.zeta)?;
                    // Drives stopping only; outcomes are reported for configured statistics.
                    monitors.push((StatisticKind::MaxLog, m));
                    monitors.len() - 1
                }
            });
        }
        Ok(Self {
            cfg: cfg.clone(),
            scenario,
            pad: cfg.pooled.pad_config(cfg.k, cfg.horizon),
            thr: cfg.pooled.threshold_config(cfg.k, cfg.horizon),
            pooled_crit: pooled_critical(cfg.alpha),
            monitors,
            stop_monitor,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Runs replication `rep_index` and also hands back its final state.
    pub fn run_with_state(&self, rep_index: u64) -> Result<(ReplicationResult, ExperimentState)> {
        let cfg = &self.cfg;
        let mut rng = replication_rng(cfg.master_seed, rep_index);
        let mut state = ExperimentState::with_thresholds(self.scenario.thresholds(), cfg.horizon)?;
        let mut monitors: Vec<SequentialMonitor> = self.monitors.iter().map(|(_, m)| m.clone()).collect();

        while !state.is_finished() {
            let arm = select_arm(&cfg.policy, &state, Some(&self.scenario), &mut rng)?;
            let x = draw(&self.scenario.arms[arm], &mut rng);
            state.record(arm, x)?;
            for m in &mut monitors {
                m.update(&state, arm)?;
            }
            if self.stop_monitor.is_some_and(|i| monitors[i].rejected()) {
                state.stop();
            }
        }

        let mut outcomes = Vec::with_capacity(cfg.statistics.len());
        for &s in &cfg.statistics {
            outcomes.push(match s {
                StatisticKind::PooledPad | StatisticKind::PooledThr => {
                    let pcfg = if s == StatisticKind::PooledPad { &self.pad } else { &self.thr };
                    let v = pooled_over_drawn(&state, pcfg)?;
                    StatOutcome { statistic: s, reject: v > self.pooled_crit, value: Some(v), rejected_at: None }
                }
                StatisticKind::MaxLin | StatisticKind::MaxLog => {
                    let i = self
                        .monitors
                        .iter()
                        .position(|(kind, _)| *kind == s)
                        .ok_or_else(|| Error::Internal(format!("no monitor for {s}")))?;
                    let first = monitors[i].first_rejection();
                    StatOutcome { statistic: s, reject: first.is_some(), value: None, rejected_at: first }
                }
                StatisticKind::OracleT => {
                    let counts = state.counts();
                    let arm = (0..counts.len()).max_by_key(|&g| (counts[g], std::cmp::Reverse(g))).unwrap_or(0);
                    let t = student_t(state.accumulator(arm));
                    let reject = t.is_some_and(|(t, n)| student_sf(t, n) < cfg.alpha);
                    StatOutcome { statistic: s, reject, value: t.map(|(t, _)| t), rejected_at: None }
                }
                StatisticKind::BonferroniT => {
                    let level = cfg.alpha / cfg.k as f64;
                    let mut best = f64::NEG_INFINITY;
                    let mut reject = false;
                    for acc in state.accumulators() {
                        if let Some((t, n)) = student_t(acc) {
                            best = best.max(t);
                            reject |= student_sf(t, n) < level;
                        }
                    }
                    let value = (best > f64::NEG_INFINITY).then_some(best);
                    StatOutcome { statistic: s, reject, value, rejected_at: None }
                }
            });
        }

        let metrics = regret_metrics(&state, &self.scenario)?;
        let result = ReplicationResult {
            rep_index,
            outcomes,
            regret: metrics.regret,
            mistakes: metrics.mistakes,
            pulls: state.counts(),
            rounds: state.t(),
            stopped_at: state.stopped_at(),
        };
        Ok((result, state))
    }

    pub fn run(&self, rep_index: u64) -> Result<ReplicationResult> {
        self.run_with_state(rep_index).map(|(r, _)| r)
    }
}

/// Runs replication `rep_index` of `cfg`.
pub fn run_once(cfg: &RunConfig, rep_index: u64) -> Result<ReplicationResult> {
    Prepared::new(cfg)?.run(rep_index)
}

/// Classical one-sample t-statistic `mean / (s / sqrt(n))` with the `n - 1`
/// divisor, with its sample size. `None` below two draws.
fn student_t(acc: &ArmAccumulator) -> Option<(f64, u64)> {
    if acc.n < 2 {
        return None;
    }
    let n = acc.n as f64;
    let s2 = acc.css() / (n - 1.0);
    let mean = acc.sum / n;
    let t = if s2 > 0.0 {
        mean / (s2 / n).sqrt()
    } else if mean == 0.0 {
        0.0
    } else {
        mean.signum() * f64::INFINITY
    };
    Some((t, acc.n))
}

/// Upper-tail probability of `t` under Student-t with `n - 1` degrees of freedom.
fn student_sf(t: f64, n: u64) -> f64 {
    if t == f64::INFINITY {
        return 0.0;
    }
    if t == f64::NEG_INFINITY {
        return 1.0;
    }
    match StudentsT::new(0.0, 1.0, (n - 1) as f64) {
        Ok(dist) => dist.sf(t),
        Err(_) => 1.0,
    }
}
