//! Arm distributions and the simulation scenarios built from them.

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};
use crate::rng::standard_normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[non_exhaustive]
pub enum ArmFamily {
    Gaussian,
}

/// True outcome distribution of one arm, in outcome units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmModel {
    pub mean: f64,
    pub scale: f64,
    pub family: ArmFamily,
    /// Benchmark the arm's mean is tested against.
    pub threshold: f64,
}

impl ArmModel {
    pub fn gaussian(mean: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return invalid_arg(format!("arm scale must be positive and finite, got {scale}"));
        }
        if !mean.is_finite() {
            return invalid_arg(format!("arm mean must be finite, got {mean}"));
        }
        Ok(Self { mean, scale, family: ArmFamily::Gaussian, threshold: 0.0 })
    }

    /// Signal-to-noise ratio of the threshold-shifted arm, `(mean - threshold) / scale`.
    pub fn snr(&self) -> f64 {
        (self.mean - self.threshold) / self.scale
    }
}

/// Draws one observation from `arm`.
///
/// Gaussian arms invert the normal CDF at a single open-interval uniform, so
/// every draw consumes exactly one word of the generator.
pub fn draw(arm: &ArmModel, rng: &mut impl RngCore) -> f64 {
    match arm.family {
        ArmFamily::Gaussian => arm.mean + arm.scale * standard_normal(rng),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Every arm has mean 0 and unit scale.
    Null,
    /// Arm 1 has mean delta; the rest are null. Unit scales.
    Spike,
    /// Arm g has mean delta * g and variance g^3.
    Multiscale,
}

impl ScenarioKind {
    pub fn label(self) -> &'static str {
        match self {
            ScenarioKind::Null => "null",
            ScenarioKind::Spike => "spike",
            ScenarioKind::Multiscale => "multiscale",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "null" => Ok(ScenarioKind::Null),
            "spike" => Ok(ScenarioKind::Spike),
            "multiscale" => Ok(ScenarioKind::Multiscale),
            other => invalid_arg(format!("unknown scenario `{other}` (expected null, spike or multiscale)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub k: usize,
    pub delta: f64,
    pub arms: Vec<ArmModel>,
}

impl Scenario {
    /// Replaces every arm's threshold. `thresholds` must have one entry per arm.
    pub fn with_thresholds(mut self, thresholds: &[f64]) -> Result<Self> {
        if thresholds.len() != self.k {
            return invalid_arg(format!(
                "expected {} thresholds, got {}",
                self.k,
                thresholds.len()
            ));
        }
        if let Some(u) = thresholds.iter().find(|u| !u.is_finite()) {
            return invalid_arg(format!("thresholds must be finite, got {u}"));
        }
        for (arm, &u) in self.arms.iter_mut().zip(thresholds) {
            arm.threshold = u;
        }
        Ok(self)
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.arms.iter().map(|a| a.threshold).collect()
    }

    /// Threshold-shifted signal-to-noise ratio of every arm.
    pub fn snrs(&self) -> Vec<f64> {
        self.arms.iter().map(ArmModel::snr).collect()
    }

    /// Index of the arm with the largest SNR, ties to the lowest index.
    pub fn best_arm(&self) -> usize {
        argmax(self.arms.iter().map(ArmModel::snr))
    }
}

pub fn make_scenario(kind: ScenarioKind, k: usize, delta: f64) -> Result<Scenario> {
    if k < 1 {
        return invalid_arg("scenario needs at least one arm");
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return invalid_arg(format!("effect size delta must be finite and >= 0, got {delta}"));
    }
    let arms = (1..=k)
        .map(|g| {
            let gf = g as f64;
            match kind {
                ScenarioKind::Null => ArmModel::gaussian(0.0, 1.0),
                ScenarioKind::Spike => ArmModel::gaussian(if g == 1 { delta } else { 0.0 }, 1.0),
                ScenarioKind::Multiscale => ArmModel::gaussian(delta * gf, gf.powf(1.5)),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scenario { kind, k, delta, arms })
}

/// First index of the maximum; NaN entries never win.
pub(crate) fn argmax(values: impl IntoIterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, v) in values.into_iter().enumerate() {
        if v > best_value {
            best = i;
            best_value = v;
        }
    }
    best
}
