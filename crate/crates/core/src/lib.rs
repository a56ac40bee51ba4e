//! Anytime-valid testing for adaptive multi-armed demonstration experiments.
//!
//! The crate answers one question: does *some* arm's mean exceed its
//! threshold? It provides
//!
//! - [`boundary`]: normal special functions, the log-boundary transform and
//!   critical values for the max tests, plus a crossing-probability oracle;
//! - [`stats`]: the pooled statistics (padded and thresholded), per-arm
//!   sequential t-statistics and the anytime max-test monitors;
//! - [`policies`]: uniform, UCB1, Thompson, SN-UCB and oracle allocation,
//!   the self-normalized SNR confidence bound, and regret accounting;
//! - [`engine`]: a seeded, order-independent Monte Carlo driver.
//!
//! Observations are stored threshold-shifted, so everything downstream tests
//! the null that every shifted mean is at most zero.

pub mod boundary;
pub mod engine;
pub mod error;
pub mod model;
pub mod policies;
pub mod rng;
pub mod state;
pub mod stats;

pub use error::{Error, Result};
pub use model::{draw, make_scenario, ArmFamily, ArmModel, Scenario, ScenarioKind};
pub use state::{ArmAccumulator, Draw, ExperimentState};
