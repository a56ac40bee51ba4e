//! The log-boundary transform `h`, its inverse, and the crossing probability `Ψ⁺`.

use crate::error::{Error, Result};

use super::normal::{norm_cdf, norm_pdf, norm_sf, pdf_over_cdf};

/// Hard cap on bisection steps in every root finder.
pub const MAX_ITER: usize = 200;

/// Lower edge of the region where `h_inv` is defined.
pub const H_INV_FLOOR_X: f64 = 1.0;

/// `h(x) = x² + 2 log Φ(x)`.
///
/// Strictly increasing on the whole line (its derivative is `2(x + φ/Φ) > 0`).
pub fn h(x: f64) -> f64 {
    let log_cdf = if x > 0.0 { (-norm_sf(x)).ln_1p() } else { norm_cdf(x).ln() };
    x * x + 2.0 * log_cdf
}

/// Derivative `h'(x) = 2 (x + φ(x)/Φ(x))`.
pub fn h_prime(x: f64) -> f64 {
    2.0 * (x + pdf_over_cdf(x))
}

/// Inverse of `h` on `[1, ∞)`; rejects `y < h(1)`.
pub fn h_inv(y: f64) -> Result<f64> {
    let floor = h(H_INV_FLOOR_X);
    if y.is_nan() || y < floor {
        return Err(Error::Domain(format!("h_inv({y}) below h(1) = {floor}")));
    }
    if y == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let hi = 2.0f64.max(y.sqrt() + 1.0);
    solve_monotone(|x| h(x) - y, h_prime, H_INV_FLOOR_X, hi, 1e-12)
}

/// `Ψ⁺(a) = 1 - Φ(a) + φ(a) [a + φ(a)/Φ(a)]`.
pub fn psi_plus(a: f64) -> f64 {
    let pdf = norm_pdf(a);
    norm_sf(a) + pdf * (a + pdf_over_cdf(a))
}

/// Derivative of `Ψ⁺`, `-(a² φ + 2a φ²/Φ + φ³/Φ²)`.
pub fn psi_plus_prime(a: f64) -> f64 {
    let pdf = norm_pdf(a);
    let ratio = pdf_over_cdf(a);
    -(a * a * pdf + 2.0 * a * pdf * ratio + pdf * ratio * ratio)
}

/// Root of a monotone function on `[lo, hi]`: bisection to `tol`, then a
/// Newton polish that is discarded if it leaves the final bracket.
pub fn solve_monotone(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64> {
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if !(f_lo.signum() != f_hi.signum() && f_lo.is_finite() && f_hi.is_finite()) {
        return Err(Error::Internal(format!(
            "no sign change on [{lo}, {hi}]: f = ({f_lo}, {f_hi})"
        )));
    }
    let increasing = f_lo < 0.0;
    for _ in 0..MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == increasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..3 {
        let slope = df(x);
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = x - f(x) / slope;
        if !(lo..=hi).contains(&next) || next == x {
            break;
        }
        x = next;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn h_at_two() {
        // 4 + 2 log Φ(2), 40-digit reference.
        assert!((h(2.0) - 3.953_974_181_342_073).abs() < 1e-12);
        // Looser published figure.
        assert!((h(2.0) - 3.953968).abs() < 1e-5);
    }

    #[test]
    fn h_fixed_point() {
        // Solution of h(x) = x with h(x) = x² + 2 log Φ(x); 40-digit reference 1.2024409608.
        let x0 = solve_monotone(|x| h(x) - x, |x| h_prime(x) - 1.0, 1.0, 1.5, 1e-14).unwrap();
        assert!((x0 - 1.202_440_960_803_578).abs() < 1e-9, "{x0}");
        assert!(x0 > 1.0);
    }

    #[test]
    fn h_inv_round_trip() {
        assert!((h_inv(h(3.0)).unwrap() - 3.0).abs() < 1e-9);
        let mut x = 1.2;
        while x <= 50.0 {
            let back = h_inv(h(x)).unwrap();
            assert!((back - x).abs() < 1e-9, "x={x}: {back}");
            x += 0.0713;
        }
    }

    #[test]
    fn h_inv_domain_guard() {
        assert!(matches!(h_inv(h(1.0) - 1e-9), Err(Error::Domain(_))));
        assert!(matches!(h_inv(f64::NAN), Err(Error::Domain(_))));
        assert!((h_inv(h(1.0)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h_is_asymptotically_quadratic() {
        let r10 = h(10.0) / 100.0;
        let r40 = h(40.0) / 1600.0;
        assert!((r40 - 1.0).abs() <= (r10 - 1.0).abs());
        assert!((r40 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psi_plus_at_zero() {
        assert!((psi_plus(0.0) - (0.5 + 1.0 / PI)).abs() < 1e-14);
        assert!((psi_plus(0.0) - 0.818310).abs() < 1e-6);
    }

    #[test]
    fn psi_plus_vanishes_at_infinity() {
        assert!(psi_plus(40.0) < 1e-300);
        assert_eq!(psi_plus(f64::MAX.sqrt()), 0.0);
    }

    #[test]
    fn psi_plus_sandwich() {
        // (1/(2x) + x) φ(x) <= Ψ⁺(x) <= (1/x + x + e^{-x²/2}) φ(x) for x >= 1.
        let mut x = 1.0;
        while x <= 10.0 {
            let pdf = norm_pdf(x);
            let v = psi_plus(x);
            let lower = (0.5 / x + x) * pdf;
            let upper = (1.0 / x + x + (-0.5 * x * x).exp()) * pdf;
            assert!(lower <= v && v <= upper, "x={x}: {lower} {v} {upper}");
            x += 0.01;
        }
        let pdf2 = norm_pdf(2.0);
        let v = psi_plus(2.0);
        assert!(v > 2.25 * pdf2 && v < (0.5 + 2.0 + (-2.0f64).exp()) * pdf2);
    }

    #[test]
    fn psi_plus_decreasing_beyond_one() {
        let mut prev = psi_plus(1.0);
        for i in 1..2000 {
            let v = psi_plus(1.0 + i as f64 * 0.005);
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn psi_plus_derivative_matches_differences() {
        for &a in &[-3.0, -0.5, 0.0, 1.0, 2.5, 4.0] {
            let eps = 1e-6;
            let fd = (psi_plus(a + eps) - psi_plus(a - eps)) / (2.0 * eps);
            assert!((fd - psi_plus_prime(a)).abs() < 1e-8, "a={a}");
            let fd = (h(a + eps) - h(a - eps)) / (2.0 * eps);
            assert!((fd - h_prime(a)).abs() < 1e-6, "a={a}");
        }
    }

    #[test]
    fn psi_plus_finite_far_left() {
        let v = psi_plus(-50.0);
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn solver_reports_missing_bracket() {
        assert!(matches!(
            solve_monotone(|x| x * x + 1.0, |x| 2.0 * x, -1.0, 1.0, 1e-12),
            Err(Error::Internal(_))
        ));
    }
}
