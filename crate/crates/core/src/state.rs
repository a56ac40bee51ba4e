//! Streaming per-arm statistics and the full experiment history.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

/// Running sufficient statistics `(n, sum, sumsq)` of one arm's observations.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ArmAccumulator {
    pub n: u64,
    pub sum: f64,
    pub sumsq: f64,
}

impl ArmAccumulator {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        self.sum += x;
        self.sumsq += x * x;
    }

    pub fn from_samples(xs: &[f64]) -> Self {
        let mut acc = Self::default();
        for &x in xs {
            acc.push(x);
        }
        acc
    }

    pub fn mean(&self) -> Option<f64> {
        (self.n > 0).then(|| self.sum / self.n as f64)
    }

    /// Centered sum of squares `n * variance`, clamped at zero.
    pub fn css(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        (self.sumsq - self.sum * self.sum / self.n as f64).max(0.0)
    }

    /// Plug-in variance with divisor `n`.
    pub fn variance(&self) -> Option<f64> {
        (self.n > 0).then(|| self.css() / self.n as f64)
    }

    pub fn std_dev(&self) -> Option<f64> {
        self.variance().map(f64::sqrt)
    }
}

/// One round of the experiment: the arm drawn and the threshold-shifted value seen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Draw {
    pub arm: usize,
    pub value: f64,
}

/// Everything observed so far in one experiment.
///
/// Observations are stored as `x - threshold[arm]`, so every statistic built
/// on top of this state tests whether some shifted mean exceeds zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentState {
    t: usize,
    horizon: usize,
    thresholds: Vec<f64>,
    accumulators: Vec<ArmAccumulator>,
    draws: Vec<Draw>,
    stopped_at: Option<usize>,
}

impl ExperimentState {
    pub fn new(k: usize, horizon: usize) -> Result<Self> {
        Self::with_thresholds(vec![0.0; k], horizon)
    }

    pub fn with_thresholds(thresholds: Vec<f64>, horizon: usize) -> Result<Self> {
        let k = thresholds.len();
        if k == 0 {
            return invalid_arg("experiment needs at least one arm");
        }
        if horizon < 1 {
            return invalid_arg("horizon must be at least 1");
        }
        Ok(Self {
            t: 0,
            horizon,
            thresholds,
            accumulators: vec![ArmAccumulator::default(); k],
            draws: Vec::with_capacity(horizon),
            stopped_at: None,
        })
    }

    /// Folds in one raw observation of `arm`, advancing the round counter.
    pub fn record(&mut self, arm: usize, raw: f64) -> Result<()> {
        if arm >= self.k() {
            return invalid_arg(format!("arm index {arm} out of range for k = {}", self.k()));
        }
        if self.is_finished() {
            return Err(Error::InvalidState(format!(
                "experiment already finished at round {}",
                self.t
            )));
        }
        let value = raw - self.thresholds[arm];
        self.accumulators[arm].push(value);
        self.draws.push(Draw { arm, value });
        self.t += 1;
        Ok(())
    }

    /// Marks the experiment as stopped early at the current round.
    pub fn stop(&mut self) {
        if self.stopped_at.is_none() {
            self.stopped_at = Some(self.t);
        }
    }

    pub fn is_finished(&self) -> bool {
        self.t >= self.horizon || self.stopped_at.is_some()
    }

    /// Rounds completed so far.
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.accumulators.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn accumulators(&self) -> &[ArmAccumulator] {
        &self.accumulators
    }

    pub fn accumulator(&self, arm: usize) -> &ArmAccumulator {
        &self.accumulators[arm]
    }

    pub fn counts(&self) -> Vec<u64> {
        self.accumulators.iter().map(|a| a.n).collect()
    }

    pub fn draws(&self) -> &[Draw] {
        &self.draws
    }

    pub fn choices(&self) -> impl Iterator<Item = usize> + '_ {
        self.draws.iter().map(|d| d.arm)
    }

    pub fn stopped_at(&self) -> Option<usize> {
        self.stopped_at
    }

    /// Length of the shared initialization phase (each arm twice).
    pub fn init_rounds(&self) -> usize {
        2 * self.k()
    }

    /// Arm prescribed for the next round while still initializing: `1,1,2,2,...,k,k`.
    pub fn init_arm(&self) -> Option<usize> {
        (self.t < self.init_rounds()).then_some(self.t / 2)
    }
}
