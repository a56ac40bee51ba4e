//! Critical values of the linear and log-boundary max tests.

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Result};

use super::normal::norm_quantile;
use super::transform::{psi_plus, psi_plus_prime, solve_monotone};

/// How the family-wise level is split across `k` arms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    /// Per-arm level `alpha / k`.
    #[default]
    Bonferroni,
    /// Per-arm level `p` solving `1 - (1 - p)^k = alpha`.
    Independent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CritConfig {
    pub alpha: f64,
    pub k: usize,
    pub correction: Correction,
}

impl CritConfig {
    pub fn new(alpha: f64, k: usize, correction: Correction) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return invalid_arg(format!("alpha must lie in (0, 1), got {alpha}"));
        }
        if k < 1 {
            return invalid_arg("k must be at least 1");
        }
        Ok(Self { alpha, k, correction })
    }

    pub fn bonferroni(alpha: f64, k: usize) -> Result<Self> {
        Self::new(alpha, k, Correction::Bonferroni)
    }

    /// Level each single-arm boundary is calibrated to.
    pub fn per_arm_level(&self) -> f64 {
        let k = self.k as f64;
        match self.correction {
            Correction::Bonferroni => self.alpha / k,
            Correction::Independent => -((-self.alpha).ln_1p() / k).exp_m1(),
        }
    }
}

/// `z` with `2 [1 - Φ(z)] = p`, the linear-boundary critical value.
pub fn crit_linear(cfg: &CritConfig) -> Result<f64> {
    let cfg = CritConfig::new(cfg.alpha, cfg.k, cfg.correction)?;
    Ok(-norm_quantile(0.5 * cfg.per_arm_level()))
}

/// `w` with `Ψ⁺(w) = p`, the log-boundary critical value.
pub fn crit_log(cfg: &CritConfig) -> Result<f64> {
    let cfg = CritConfig::new(cfg.alpha, cfg.k, cfg.correction)?;
    let level = cfg.per_arm_level();
    if psi_plus(1.0) <= level {
        return invalid_arg(format!(
            "per-arm level {level} is not below Ψ⁺(1) = {}; no critical value >= 1 exists",
            psi_plus(1.0)
        ));
    }
    let hi = (2.0 * (4.0 * cfg.k as f64 / cfg.alpha).ln()).sqrt() + 10.0;
    solve_monotone(|w| psi_plus(w) - level, psi_plus_prime, 1.0, hi, 1e-12)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::normal::norm_sf;

    fn bonf(alpha: f64, k: usize) -> CritConfig {
        CritConfig::bonferroni(alpha, k).unwrap()
    }

    #[test]
    fn linear_single_arm() {
        assert!((crit_linear(&bonf(0.05, 1)).unwrap() - 1.959964).abs() < 1e-6);
    }

    #[test]
    fn linear_ten_arms() {
        // Φ⁻¹(0.9975), 40-digit reference.
        let z = crit_linear(&bonf(0.05, 10)).unwrap();
        assert!((z - 2.807_033_768_343_804).abs() < 1e-10);
        assert!((z - 2.807034).abs() < 1e-5);
    }

    #[test]
    fn log_ten_arms() {
        let w = crit_log(&bonf(0.05, 10)).unwrap();
        assert!((psi_plus(w) - 0.005).abs() < 1e-10);
        assert!(w >= (2.0 * 10f64.ln()).sqrt());
        // 40-digit reference root.
        assert!((w - 3.368_335_092_253_882).abs() < 1e-9);
    }

    #[test]
    fn log_single_arm_reference() {
        let w = crit_log(&bonf(0.05, 1)).unwrap();
        assert!((w - 2.503_064_584_515_505).abs() < 1e-9);
    }

    #[test]
    fn residuals_are_tiny() {
        for &alpha in &[0.001, 0.01, 0.05, 0.1, 0.2] {
            for &k in &[1usize, 2, 5, 10, 50, 200] {
                for corr in [Correction::Bonferroni, Correction::Independent] {
                    let cfg = CritConfig::new(alpha, k, corr).unwrap();
                    let p = cfg.per_arm_level();
                    let z = crit_linear(&cfg).unwrap();
                    let w = crit_log(&cfg).unwrap();
                    let res_lin = match corr {
                        Correction::Bonferroni => 2.0 * k as f64 * norm_sf(z) - alpha,
                        Correction::Independent => {
                            1.0 - (1.0 - 2.0 * norm_sf(z)).powi(k as i32) - alpha
                        }
                    };
                    let res_log = match corr {
                        Correction::Bonferroni => k as f64 * psi_plus(w) - alpha,
                        Correction::Independent => 1.0 - (1.0 - psi_plus(w)).powi(k as i32) - alpha,
                    };
                    assert!(res_lin.abs() <= 1e-9 * alpha, "lin {alpha} {k} {corr:?}: {res_lin}");
                    assert!(res_log.abs() <= 1e-9 * alpha, "log {alpha} {k} {corr:?}: {res_log}");
                    assert!((psi_plus(w) - p).abs() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn monotone_in_k_and_alpha() {
        for corr in [Correction::Bonferroni, Correction::Independent] {
            let mut prev = (0.0, 0.0);
            for k in 1..=200 {
                let cfg = CritConfig::new(0.05, k, corr).unwrap();
                let cur = (crit_linear(&cfg).unwrap(), crit_log(&cfg).unwrap());
                assert!(cur.0 >= prev.0 && cur.1 >= prev.1, "k={k}");
                if k >= 2 {
                    assert!(cur.1 >= (2.0 * (k as f64).ln()).sqrt());
                }
                prev = cur;
            }
            let mut prev = (f64::INFINITY, f64::INFINITY);
            let mut alpha = 0.001;
            while alpha <= 0.2 {
                let cfg = CritConfig::new(alpha, 10, corr).unwrap();
                let cur = (crit_linear(&cfg).unwrap(), crit_log(&cfg).unwrap());
                assert!(cur.0 <= prev.0 && cur.1 <= prev.1, "alpha={alpha}");
                prev = cur;
                alpha += 0.001;
            }
        }
    }

    #[test]
    fn independent_is_less_conservative() {
        let b = bonf(0.05, 10);
        let i = CritConfig::new(0.05, 10, Correction::Independent).unwrap();
        assert!(i.per_arm_level() > b.per_arm_level());
        assert!(crit_linear(&i).unwrap() < crit_linear(&b).unwrap());
        assert!(crit_log(&i).unwrap() < crit_log(&b).unwrap());
    }

    #[test]
    fn invalid_configs() {
        assert!(CritConfig::bonferroni(0.0, 3).is_err());
        assert!(CritConfig::bonferroni(1.0, 3).is_err());
        assert!(CritConfig::bonferroni(0.05, 0).is_err());
        // Level too large for a root above 1.
        assert!(crit_log(&CritConfig { alpha: 0.95, k: 1, correction: Correction::Bonferroni }).is_err());
    }
}
