//! Pooled statistics over all draws, scaled by regularized per-arm spreads.
//!
//! Every variant is normalized by `sqrt(T)` with `T` the experiment horizon,
//! so a partially observed state gives the running process `H_t` rather than
//! a restandardized one.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::model::Scenario;
use crate::state::{ArmAccumulator, ExperimentState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PooledVariant {
    /// Every arm's spread is inflated by a padding term.
    Pad,
    /// Arms with too few draws are dropped; the rest use the plug-in spread.
    Threshold,
}

/// Shape of the padding term added to the plug-in standard deviation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PadForm {
    /// `λ / sqrt(N)`, shrinking with the arm's sample size.
    #[default]
    InverseRoot,
    /// `λ sqrt(N)`, the literal growing form, kept for comparison.
    Root,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PooledConfig {
    pub variant: PooledVariant,
    /// Padding level; ignored by [`PooledVariant::Threshold`].
    pub lambda: f64,
    /// Trimming level; arms need `N > rho`. Ignored by [`PooledVariant::Pad`].
    pub rho: f64,
    pub pad_form: PadForm,
}

impl PooledConfig {
    /// Padded statistic with `λ = sqrt(log(kT))`.
    pub fn pad(k: usize, horizon: usize) -> Self {
        Self {
            variant: PooledVariant::Pad,
            lambda: default_lambda(k, horizon),
            rho: f64::INFINITY,
            pad_form: PadForm::InverseRoot,
        }
    }

    /// Thresholded statistic with `ρ = c_rho log(kT)`.
    pub fn threshold(k: usize, horizon: usize, c_rho: f64) -> Self {
        Self {
            variant: PooledVariant::Threshold,
            lambda: f64::INFINITY,
            rho: c_rho * log_kt(k, horizon),
            pad_form: PadForm::InverseRoot,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.variant {
            PooledVariant::Pad if !(self.lambda > 0.0 && self.lambda.is_finite()) => {
                invalid_arg(format!("padding lambda must be positive and finite, got {}", self.lambda))
            }
            PooledVariant::Threshold if !(self.rho > 0.0) => {
                invalid_arg(format!("trimming rho must be positive, got {}", self.rho))
            }
            _ => Ok(()),
        }
    }

    /// Regularized spread of `acc`, or `None` when the arm is dropped.
    fn spread(&self, acc: &ArmAccumulator) -> Result<Option<f64>> {
        match self.variant {
            PooledVariant::Pad => {
                let sd = acc.std_dev().ok_or_else(|| {
                    Error::InvalidState("padded pooled statistic needs every arm drawn".into())
                })?;
                let n = (acc.n as f64).sqrt();
                let pad = match self.pad_form {
                    PadForm::InverseRoot => self.lambda / n,
                    PadForm::Root => self.lambda * n,
                };
                Ok(Some(sd + pad))
            }
            PooledVariant::Threshold => {
                if (acc.n as f64) > self.rho {
                    Ok(acc.std_dev())
                } else {
                    Ok(None)
                }
            }
        }
    }
}

pub fn log_kt(k: usize, horizon: usize) -> f64 {
    (k as f64 * horizon as f64).ln()
}

pub fn default_lambda(k: usize, horizon: usize) -> f64 {
    log_kt(k, horizon).sqrt()
}

fn pooled_with(
    state: &ExperimentState,
    cfg: &PooledConfig,
    centers: Option<&[f64]>,
    skip_empty: bool,
) -> Result<f64> {
    cfg.validate()?;
    let mut total = 0.0;
    for (g, acc) in state.accumulators().iter().enumerate() {
        if skip_empty && acc.n == 0 {
            continue;
        }
        let Some(sd) = cfg.spread(acc)? else { continue };
        let numerator = match centers {
            Some(mu) => acc.sum - acc.n as f64 * mu[g],
            None => acc.sum,
        };
        if numerator == 0.0 {
            continue;
        }
        // A zero spread only survives trimming on exactly repeated draws.
        total += if sd > 0.0 { numerator / sd } else { numerator.signum() * f64::INFINITY };
    }
    Ok(total / (state.horizon() as f64).sqrt())
}

/// Feasible pooled statistic `(1/sqrt(T)) Σ_g sum_g / σ̃_g`.
///
/// Each arm's spread is its end-of-sample value. Under
/// [`PooledVariant::Threshold`] an experiment where no arm passes the trim
/// returns exactly 0.
pub fn pooled(state: &ExperimentState, cfg: &PooledConfig) -> Result<f64> {
    pooled_with(state, cfg, None, false)
}

/// [`pooled`] summed over the draws actually made: arms never drawn add no
/// terms instead of failing the padded variant. Used for policies that skip
/// the initialization phase.
pub fn pooled_over_drawn(state: &ExperimentState, cfg: &PooledConfig) -> Result<f64> {
    pooled_with(state, cfg, None, true)
}

/// [`pooled`] with each draw centered at its arm's true (shifted) mean.
pub fn pooled_centered(state: &ExperimentState, cfg: &PooledConfig, truth: &Scenario) -> Result<f64> {
    let mu = shifted_means(state, truth)?;
    pooled_with(state, cfg, Some(&mu), true)
}

/// Infeasible statistic `H_t = (1/sqrt(T)) Σ_{s<=t} X_s / σ_{g_s}` with true scales.
pub fn infeasible_pooled(state: &ExperimentState, truth: &Scenario) -> Result<f64> {
    check_truth(state, truth)?;
    let total: f64 = state
        .accumulators()
        .iter()
        .zip(&truth.arms)
        .map(|(acc, arm)| acc.sum / arm.scale)
        .sum();
    Ok(total / (state.horizon() as f64).sqrt())
}

/// Allocation-weighted signal `sqrt(t) Σ_g (N_g / t) z_g` after `t` rounds.
pub fn drift(state: &ExperimentState, truth: &Scenario) -> Result<f64> {
    check_truth(state, truth)?;
    let t = state.t() as f64;
    if t == 0.0 {
        return Ok(0.0);
    }
    let weighted: f64 = state
        .accumulators()
        .iter()
        .zip(truth.snrs())
        .map(|(acc, z)| acc.n as f64 / t * z)
        .sum();
    Ok(t.sqrt() * weighted)
}

fn check_truth(state: &ExperimentState, truth: &Scenario) -> Result<()> {
    if truth.k != state.k() {
        return invalid_arg(format!("scenario has {} arms, state has {}", truth.k, state.k()));
    }
    Ok(())
}

fn shifted_means(state: &ExperimentState, truth: &Scenario) -> Result<Vec<f64>> {
    check_truth(state, truth)?;
    Ok(truth
        .arms
        .iter()
        .zip(state.thresholds())
        .map(|(arm, u)| arm.mean - u)
        .collect())
}
