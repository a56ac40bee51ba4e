use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::ArmAccumulator;
use crate::stats::t_stat;

/// Interval for the sign-aligned SNR `(μ/σ) sign(Ẑ)` built from one arm's sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrConfidenceBound {
    pub lower: f64,
    pub upper: f64,
    /// `(1 + 2|Ẑ|/sqrt(s)) τ`, computable from data.
    pub width_feasible: f64,
    /// `(2 + 5|z|) τ` for the true SNR `z`, when supplied.
    pub width_oracle: Option<f64>,
    pub tau: f64,
    /// Set when `τ > 1/2`, where the width guarantee no longer applies.
    pub tau_too_large: bool,
}

impl SnrConfidenceBound {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Self-normalized confidence bound on the SNR after `s = acc.n` draws at round `t`.
///
/// With `τ = 8 ν² sqrt(α log(4t) / s)` and `a = |Ẑ|`,
/// `L = ((1 - τ)/sqrt(s)) a sqrt(1 - τ²) - τ` and `U = ((1 + τ)/sqrt(s)) a + τ`.
/// `sqrt(1 - τ²)` is taken as 0 once `τ > 1`.
pub fn snr_confidence(
    acc: &ArmAccumulator,
    t: usize,
    alpha: f64,
    nu: f64,
    true_snr: Option<f64>,
) -> Result<SnrConfidenceBound> {
    if acc.n < 2 {
        return Err(Error::InvalidState(format!(
            "SNR confidence bound needs at least 2 draws, arm has {}",
            acc.n
        )));
    }
    let s = acc.n as f64;
    let root_s = s.sqrt();
    let a = t_stat(acc)?.abs();
    let tau = 8.0 * nu * nu * (alpha * (4.0 * t as f64).ln() / s).sqrt();
    let shrink = (1.0 - tau * tau).max(0.0).sqrt();
    // The ∞ · 0 corner (degenerate spread with τ >= 1) resolves to the data-free term.
    let scaled = |factor: f64| if factor == 0.0 { 0.0 } else { factor * a / root_s };
    Ok(SnrConfidenceBound {
        lower: scaled((1.0 - tau) * shrink) - tau,
        upper: scaled(1.0 + tau) + tau,
        width_feasible: (1.0 + 2.0 * a / root_s) * tau,
        width_oracle: true_snr.map(|z| (2.0 + 5.0 * z.abs()) * tau),
        tau,
        tau_too_large: tau > 0.5,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_statistic_is_symmetric() {
        let acc = ArmAccumulator::from_samples(&[1.0, -1.0, 0.5, -0.5]);
        let b = snr_confidence(&acc, 10, 0.01, 1.0, None).unwrap();
        assert_eq!(b.lower, -b.tau);
        assert_eq!(b.upper, b.tau);
    }

    #[test]
    fn collapses_to_point_estimate() {
        let xs: Vec<f64> = (0..64).map(|i| 1.0 + ((i * 37) % 11) as f64 / 10.0).collect();
        let acc = ArmAccumulator::from_samples(&xs);
        let est = t_stat(&acc).unwrap() / 8.0;
        let b = snr_confidence(&acc, 1, 1e-14, 1.0, Some(0.1)).unwrap();
        assert!(b.tau < 1e-5);
        assert!((b.lower - est).abs() < 1e-4 && (b.upper - est).abs() < 1e-4);
        assert!(b.width_oracle.unwrap() < 1e-4);
        assert!(!b.tau_too_large);
    }

    #[test]
    fn large_tau_is_flagged_and_clamped() {
        let acc = ArmAccumulator::from_samples(&[0.3, 1.0, 2.0]);
        let b = snr_confidence(&acc, 100, 2.0, 1.0, None).unwrap();
        assert!(b.tau > 1.0 && b.tau_too_large);
        assert_eq!(b.lower, -b.tau);
        assert!(b.lower <= b.upper);
    }

    #[test]
    fn needs_two_draws() {
        assert!(snr_confidence(&ArmAccumulator::from_samples(&[1.0]), 5, 1.0, 1.0, None).is_err());
    }

    proptest! {
        #[test]
        fn lower_below_upper(
            xs in prop::collection::vec(-5.0f64..5.0, 2..200),
            t in 1usize..100_000,
            alpha in 1e-6f64..4.0,
        ) {
            let acc = ArmAccumulator::from_samples(&xs);
            let b = snr_confidence(&acc, t, alpha, 1.0, None).unwrap();
            if b.tau <= 0.5 {
                prop_assert!(b.lower <= b.upper, "{b:?}");
            }
        }
    }
}
