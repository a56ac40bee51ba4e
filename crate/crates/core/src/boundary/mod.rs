//! Special functions, boundary transforms and critical-value solvers.

mod critical;
mod crossing;
mod normal;
mod transform;

pub use critical::{crit_linear, crit_log, CritConfig, Correction};
pub use crossing::{crossing_mc, BoundaryKind, CrossingEstimate};
pub use normal::{norm_cdf, norm_pdf, norm_quantile, norm_sf, std_normal};
pub use transform::{h, h_inv, h_prime, psi_plus, psi_plus_prime, solve_monotone, MAX_ITER};

/// Log-boundary threshold for a t-statistic with `q` draws, when monitoring
/// starts at (real-valued) count `q_start`: `h⁻¹(log(q / q_start) + h(w))`.
pub fn log_boundary(w: f64, q: f64, q_start: f64) -> crate::Result<f64> {
    h_inv((q / q_start).ln() + h(w))
}

/// Linear-boundary threshold for a t-statistic: `z sqrt(q / q_start)`.
pub fn linear_boundary(z: f64, q: f64, q_start: f64) -> f64 {
    z * (q / q_start).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_boundary_monotone_and_anchored() {
        // For fixed k and q in [ζT/k, T] the log threshold starts at w and rises.
        for &(k, t, zeta) in &[(5usize, 200usize, 2.0f64), (10, 500, 2.0), (50, 2000, 1.0), (20, 1000, 3.0)] {
            let w = crit_log(&CritConfig::bonferroni(0.05, k).unwrap()).unwrap();
            let start = zeta * t as f64 / k as f64;
            assert!((log_boundary(w, start, start).unwrap() - w).abs() < 1e-9);
            let mut prev = w;
            let mut q = start.ceil();
            while q <= t as f64 {
                let b = log_boundary(w, q, start).unwrap();
                assert!(b >= prev - 1e-12, "k={k} q={q}");
                prev = b;
                q += 1.0;
            }
        }
    }
}
