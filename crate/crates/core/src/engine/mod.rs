//! Experiment runner and seeded Monte Carlo driver.
//!
//! Each replication owns its generator, state and monitors. The driver runs
//! replications on a worker pool of the configured size and merges integer
//! counts, so summaries are identical for every degree of parallelism.

mod config;
mod driver;
mod run;

pub use config::{PooledParams, RunConfig, StatisticKind, DEFAULT_SEED};
pub use driver::{
    default_delta_grid, mc_se, monte_carlo, monte_carlo_results, power_sweep, summarize, table_type1, SummaryRow,
    Tally,
};
pub use run::{run_once, Prepared, ReplicationResult, StatOutcome};
