//! Anytime max-test monitors over the per-arm t-statistics.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{crit_linear, crit_log, h, h_inv, BoundaryKind, CritConfig};
use crate::error::{invalid_arg, Result};
use crate::state::ExperimentState;

use super::tstat::t_stat;

/// Round and arm of the first boundary crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub round: usize,
    pub arm: usize,
}

/// Watches every arm's t-statistic once the arm holds at least `ζT/k` draws.
///
/// Boundary values depend only on the arm's draw count, so they are tabulated
/// once per monitor and shared between clones.
#[derive(Debug, Clone)]
pub struct SequentialMonitor {
    boundary: BoundaryKind,
    zeta: f64,
    k: usize,
    horizon: usize,
    critical: f64,
    eligibility_count: u64,
    t_zeta: f64,
    /// `levels[q - eligibility_count]` is the threshold for `Ẑ` at count `q`.
    levels: Arc<[f64]>,
    crossed: Vec<bool>,
    first_rejection: Option<Rejection>,
}

impl SequentialMonitor {
    pub fn new(boundary: BoundaryKind, crit: &CritConfig, horizon: usize, zeta: f64) -> Result<Self> {
        let critical = match boundary {
            BoundaryKind::Linear => crit_linear(crit)?,
            BoundaryKind::Log => crit_log(crit)?,
        };
        Self::with_critical(boundary, crit.k, horizon, zeta, critical)
    }

    pub fn with_critical(
        boundary: BoundaryKind,
        k: usize,
        horizon: usize,
        zeta: f64,
        critical: f64,
    ) -> Result<Self> {
        if k < 1 || horizon < 1 {
            return invalid_arg("monitor needs k >= 1 and horizon >= 1");
        }
        if !(zeta >= 1.0 && zeta.is_finite()) {
            return invalid_arg(format!("zeta must be finite and >= 1, got {zeta}"));
        }
        if !critical.is_finite() || (boundary == BoundaryKind::Log && critical < 1.0) {
            return invalid_arg(format!("unusable critical value {critical} for {boundary} boundary"));
        }
        let t_zeta = zeta * horizon as f64 / k as f64;
        let eligibility_count = t_zeta.ceil() as u64;
        let h_crit = h(critical);
        let levels = (eligibility_count..=horizon.max(eligibility_count as usize) as u64)
            .map(|q| {
                let ratio = q as f64 / t_zeta;
                match boundary {
                    BoundaryKind::Linear => Ok(critical * ratio.sqrt()),
                    BoundaryKind::Log => h_inv(ratio.ln() + h_crit),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            boundary,
            zeta,
            k,
            horizon,
            critical,
            eligibility_count,
            t_zeta,
            levels: levels.into(),
            crossed: vec![false; k],
            first_rejection: None,
        })
    }

    /// Checks the arm that was just drawn and returns the (latched) first rejection.
    pub fn update(&mut self, state: &ExperimentState, arm: usize) -> Result<Option<Rejection>> {
        let acc = state.accumulator(arm);
        if let Some(level) = self.level(acc.n) {
            if t_stat(acc)? > level {
                self.crossed[arm] = true;
                if self.first_rejection.is_none() {
                    self.first_rejection = Some(Rejection { round: state.t(), arm });
                }
            }
        }
        Ok(self.first_rejection)
    }

    /// Boundary for an arm holding `q` draws, or `None` while it is ineligible.
    pub fn level(&self, q: u64) -> Option<f64> {
        if q < self.eligibility_count {
            return None;
        }
        let idx = (q - self.eligibility_count) as usize;
        match self.levels.get(idx) {
            Some(&v) => Some(v),
            None => {
                let ratio = q as f64 / self.t_zeta;
                Some(match self.boundary {
                    BoundaryKind::Linear => self.critical * ratio.sqrt(),
                    BoundaryKind::Log => h_inv(ratio.ln() + h(self.critical)).ok()?,
                })
            }
        }
    }

    /// Returns the monitor to its untriggered state, keeping the tabulated boundary.
    pub fn reset(&mut self) {
        self.crossed.iter_mut().for_each(|c| *c = false);
        self.first_rejection = None;
    }

    pub fn rejected(&self) -> bool {
        self.first_rejection.is_some()
    }

    pub fn first_rejection(&self) -> Option<Rejection> {
        self.first_rejection
    }

    pub fn crossed(&self) -> &[bool] {
        &self.crossed
    }

    pub fn boundary(&self) -> BoundaryKind {
        self.boundary
    }

    pub fn critical(&self) -> f64 {
        self.critical
    }

    pub fn eligibility_count(&self) -> u64 {
        self.eligibility_count
    }

    pub fn t_zeta(&self) -> f64 {
        self.t_zeta
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn k(&self) -> usize {
        self.k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::log_boundary;

    #[test]
    fn tight_arm_rejects_at_four() {
        let crit = CritConfig::bonferroni(0.05, 1).unwrap();
        for kind in [BoundaryKind::Linear, BoundaryKind::Log] {
            let mut mon = SequentialMonitor::new(kind, &crit, 4, 1.0).unwrap();
            assert_eq!(mon.eligibility_count(), 4);
            let mut s = ExperimentState::new(1, 4).unwrap();
            for (i, x) in [10.0, 10.1, 9.9, 10.05].into_iter().enumerate() {
                s.record(0, x).unwrap();
                let r = mon.update(&s, 0).unwrap();
                if i < 3 {
                    assert_eq!(r, None);
                } else {
                    assert_eq!(r, Some(Rejection { round: 4, arm: 0 }));
                }
            }
        }
    }

    #[test]
    fn ineligible_arm_never_counts() {
        let crit = CritConfig::bonferroni(0.05, 2).unwrap();
        let mut mon = SequentialMonitor::new(BoundaryKind::Linear, &crit, 10, 2.0).unwrap();
        assert_eq!(mon.eligibility_count(), 10);
        let mut s = ExperimentState::new(2, 10).unwrap();
        for i in 0..9 {
            s.record(0, 100.0 + i as f64).unwrap();
            assert_eq!(mon.update(&s, 0).unwrap(), None);
        }
        assert!(!mon.rejected());
    }

    #[test]
    fn rejection_latches() {
        // ζT/k = 4 with ten nominal arms, only the first of which is drawn.
        let mut mon = SequentialMonitor::with_critical(BoundaryKind::Linear, 10, 40, 1.0, 2.0).unwrap();
        let mut s = ExperimentState::new(1, 40).unwrap();
        // Strong positive start, then a long negative run that drags Ẑ below zero.
        let mut seen = false;
        for i in 0..40 {
            let x = if i < 1 { 5.0 } else if i < 20 { 1.0 + 0.01 * i as f64 } else { -30.0 };
            s.record(0, x).unwrap();
            let r = mon.update(&s, 0).unwrap();
            if seen {
                assert!(r.is_some());
            }
            seen |= r.is_some();
        }
        assert!(t_stat(s.accumulator(0)).unwrap() < 0.0);
        assert!(mon.rejected());
        let first = mon.first_rejection().unwrap();
        mon.reset();
        assert!(!mon.rejected());
        assert!(first.round >= mon.eligibility_count() as usize);
    }

    #[test]
    fn tabulated_levels_match_formulas() {
        let crit = CritConfig::bonferroni(0.05, 10).unwrap();
        let lin = SequentialMonitor::new(BoundaryKind::Linear, &crit, 500, 2.0).unwrap();
        let log = SequentialMonitor::new(BoundaryKind::Log, &crit, 500, 2.0).unwrap();
        assert_eq!(lin.t_zeta(), 100.0);
        for q in [100u64, 101, 250, 500, 700] {
            let l = lin.level(q).unwrap();
            assert!((l - lin.critical() * (q as f64 / 100.0).sqrt()).abs() < 1e-12);
            let g = log.level(q).unwrap();
            assert!((g - log_boundary(log.critical(), q as f64, 100.0).unwrap()).abs() < 1e-12);
        }
        assert_eq!(lin.level(99), None);
        // Fractional ζT/k: eligibility rounds up, the boundary uses the real value.
        let m = SequentialMonitor::new(BoundaryKind::Linear, &CritConfig::bonferroni(0.05, 3).unwrap(), 200, 2.0)
            .unwrap();
        assert_eq!(m.eligibility_count(), 134);
        assert!(m.level(134).unwrap() > m.critical());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(SequentialMonitor::with_critical(BoundaryKind::Linear, 2, 10, 0.5, 2.0).is_err());
        assert!(SequentialMonitor::with_critical(BoundaryKind::Log, 2, 10, 2.0, 0.5).is_err());
        assert!(SequentialMonitor::with_critical(BoundaryKind::Linear, 0, 10, 2.0, 2.0).is_err());
    }
}
