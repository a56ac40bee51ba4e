//! Monte Carlo driver and the table and power grids built on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ScenarioKind;
use crate::policies::PolicyKind;

use super::config::{RunConfig, StatisticKind};
use super::run::{Prepared, ReplicationResult};

/// Aggregated outcome of one statistic over all replications of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub scenario: ScenarioKind,
    pub statistic: StatisticKind,
    pub policy: PolicyKind,
    pub k: usize,
    pub horizon: usize,
    pub delta: f64,
    pub alpha: f64,
    pub zeta: f64,
    pub reps: u64,
    pub reject_rate: f64,
    pub mc_se: f64,
    pub mean_regret: f64,
    pub mean_mistakes: f64,
    /// Mean rounds played; reported only when early stopping is enabled.
    pub mean_stop_time: Option<f64>,
    pub master_seed: u64,
}

/// Integer counts over a set of replications. Merging is exact, so any
/// grouping or order of replications gives the same totals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tally {
    pub reps: u64,
    pub rejections: Vec<u64>,
    pub pulls: Vec<u64>,
    pub mistakes: u64,
    pub rounds: u64,
}

impl Tally {
    pub fn of(result: &ReplicationResult) -> Self {
        Self {
            reps: 1,
            rejections: result.outcomes.iter().map(|o| o.reject as u64).collect(),
            pulls: result.pulls.clone(),
            mistakes: result.mistakes,
            rounds: result.rounds as u64,
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        fn add(a: &mut Vec<u64>, b: Vec<u64>) {
            if a.len() < b.len() {
                a.resize(b.len(), 0);
            }
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        self.reps += other.reps;
        add(&mut self.rejections, other.rejections);
        add(&mut self.pulls, other.pulls);
        self.mistakes += other.mistakes;
        self.rounds += other.rounds;
        self
    }
}

/// Binomial standard error `sqrt(p(1 - p) / reps)`.
pub fn mc_se(p: f64, reps: u64) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

fn with_pool<T: Send>(parallelism: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::Internal(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(job))
}

/// Every replication of `cfg`, in replication order.
pub fn monte_carlo_results(cfg: &RunConfig) -> Result<Vec<ReplicationResult>> {
    let prepared = Prepared::new(cfg)?;
    with_pool(cfg.parallelism, || {
        (0..cfg.reps).into_par_iter().map(|rep| prepared.run(rep)).collect::<Result<Vec<_>>>()
    })?
}

/// Summary rows (one per configured statistic) for already-run replications.
pub fn summarize(cfg: &RunConfig, results: &[ReplicationResult]) -> Result<Vec<SummaryRow>> {
    let prepared = Prepared::new(cfg)?;
    let tally = results.iter().map(Tally::of).fold(Tally::default(), Tally::merge);
    Ok(rows_from_tally(&prepared, &tally))
}

fn rows_from_tally(prepared: &Prepared, tally: &Tally) -> Vec<SummaryRow> {
    let cfg = prepared.config();
    let reps = tally.reps.max(1);
    let z = prepared.scenario().snrs();
    let best = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let regret: f64 = tally.pulls.iter().zip(&z).map(|(&n, &zg)| (best - zg) * n as f64).sum();
    cfg.statistics
        .iter()
        .enumerate()
        .map(|(i, &statistic)| {
            let p = tally.rejections.get(i).copied().unwrap_or(0) as f64 / reps as f64;
            SummaryRow {
                scenario: cfg.scenario,
                statistic,
                policy: cfg.policy.kind,
                k: cfg.k,
                horizon: cfg.horizon,
                delta: cfg.delta,
                alpha: cfg.alpha,
                zeta: cfg.zeta,
                reps: tally.reps,
                reject_rate: p,
                mc_se: mc_se(p, reps),
                mean_regret: regret / reps as f64,
                mean_mistakes: tally.mistakes as f64 / reps as f64,
                mean_stop_time: cfg.early_stop.then(|| tally.rounds as f64 / reps as f64),
                master_seed: cfg.master_seed,
            }
        })
        .collect()
}

/// Runs all replications of `cfg` and returns one row per configured statistic.
///
/// Replication `i` always uses the stream derived from `(master_seed, i)`,
/// and counts are merged exactly, so rows do not depend on `parallelism`.
pub fn monte_carlo(cfg: &RunConfig) -> Result<Vec<SummaryRow>> {
    let prepared = Prepared::new(cfg)?;
    let tally = with_pool(cfg.parallelism, || {
        (0..cfg.reps)
            .into_par_iter()
            .map(|rep| prepared.run(rep).map(|r| Tally::of(&r)))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))
    })??;
    Ok(rows_from_tally(&prepared, &tally))
}

/// Size grid under the null: every `(k, T)` pair with `base`'s policy and
/// statistics. Rows are grouped by statistic, then `k`, then `T`.
pub fn table_type1(k_list: &[usize], t_list: &[usize], base: &RunConfig) -> Result<Vec<SummaryRow>> {
    if k_list.is_empty() || t_list.is_empty() {
        return Err(Error::InvalidArgument("table grid needs at least one k and one T".into()));
    }
    let mut rows = Vec::new();
    for &k in k_list {
        for &horizon in t_list {
            let cfg = RunConfig { scenario: ScenarioKind::Null, k, delta: 0.0, horizon, thresholds: None, ..base.clone() };
            rows.extend(monte_carlo(&cfg)?);
        }
    }
    let rank = |s: StatisticKind| base.statistics.iter().position(|&x| x == s);
    rows.sort_by_key(|r| rank(r.statistic));
    Ok(rows)
}

/// Power grid over policies and effect sizes.
///
/// The oracle additionally reports its one-sample t-test and the uniform
/// policy its per-arm Bonferroni t-tests.
pub fn power_sweep(
    scenario: ScenarioKind,
    deltas: &[f64],
    policies: &[PolicyKind],
    statistics: &[StatisticKind],
    base: &RunConfig,
) -> Result<Vec<SummaryRow>> {
    if deltas.is_empty() || policies.is_empty() || statistics.is_empty() {
        return Err(Error::InvalidArgument("power grid needs deltas, policies and statistics".into()));
    }
    let mut rows = Vec::new();
    for &kind in policies {
        let mut stats = statistics.to_vec();
        let native = match kind {
            PolicyKind::Oracle => Some(StatisticKind::OracleT),
            PolicyKind::Uniform => Some(StatisticKind::BonferroniT),
            _ => None,
        };
        if let Some(s) = native {
            if !stats.contains(&s) {
                stats.push(s);
            }
        }
        for &delta in deltas {
            let mut cfg = RunConfig { scenario, delta, statistics: stats.clone(), thresholds: None, ..base.clone() };
            cfg.policy.kind = kind;
            rows.extend(monte_carlo(&cfg)?);
        }
    }
    Ok(rows)
}

/// Default effect-size grid: 11 evenly spaced points on `[0, 1]`.
pub fn default_delta_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}
