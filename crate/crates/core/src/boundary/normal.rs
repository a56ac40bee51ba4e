//! Standard normal CDF, density and quantile.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{invalid_arg, Result};

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Standard normal CDF via `erfc`, accurate in both tails.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `1 - Φ(x)` without cancellation for large `x`.
pub fn norm_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// `(Φ(x), φ(x))`, rejecting NaN.
pub fn std_normal(x: f64) -> Result<(f64, f64)> {
    if x.is_nan() {
        return invalid_arg("standard normal evaluated at NaN");
    }
    Ok((norm_cdf(x), norm_pdf(x)))
}

/// Mills-type ratio `φ(x) / Φ(x)`, stable for very negative `x`.
pub(crate) fn pdf_over_cdf(x: f64) -> f64 {
    if x > -30.0 {
        norm_pdf(x) / norm_cdf(x)
    } else {
        // Asymptotic series of 1/Mills ratio at the far left tail.
        let y = 1.0 / (x * x);
        -x / (1.0 - y + 3.0 * y * y - 15.0 * y * y * y)
    }
}

/// Inverse standard normal CDF (Wichura, AS 241, PPND16).
///
/// Returns `-inf`/`+inf` at 0 and 1 and NaN outside [0, 1].
pub fn norm_quantile(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }
    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        let num = (((((((2.509_080_928_730_122_7e3 * r + 3.343_057_558_358_813e4) * r
            + 6.726_577_092_700_87e4)
            * r
            + 4.592_195_393_154_987e4)
            * r
            + 1.373_169_376_550_946e4)
            * r
            + 1.971_590_950_306_551_3e3)
            * r
            + 1.331_416_678_917_843_8e2)
            * r
            + 3.387_132_872_796_366_5)
            * q;
        let den = ((((((5.226_495_278_852_545e3 * r + 2.872_908_573_572_194_3e4) * r
            + 3.930_789_580_009_271e4)
            * r
            + 2.121_379_430_158_659_7e4)
            * r
            + 5.394_196_021_424_751e3)
            * r
            + 6.871_870_074_920_579e2)
            * r
            + 4.231_333_070_160_091e1)
            * r
            + 1.0;
        return num / den;
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let mut r = (-tail.ln()).sqrt();
    let val = if r <= 5.0 {
        r -= 1.6;
        let num = ((((((7.745_450_142_783_414e-4 * r + 2.272_384_498_926_918_4e-2) * r
            + 2.417_807_251_774_506e-1)
            * r
            + 1.270_458_252_452_368_4)
            * r
            + 3.647_848_324_763_204_5)
            * r
            + 5.769_497_221_460_691)
            * r
            + 4.630_337_846_156_545)
            * r
            + 1.423_437_110_749_683_5;
        let den = ((((((1.050_750_071_644_416_8e-9 * r + 5.475_938_084_995_345e-4) * r
            + 1.519_866_656_361_645_7e-2)
            * r
            + 1.481_039_764_274_800_8e-1)
            * r
            + 6.897_673_349_851e-1)
            * r
            + 1.676_384_830_183_803_8)
            * r
            + 2.053_191_626_637_759)
            * r
            + 1.0;
        num / den
    } else {
        r -= 5.0;
        let num = ((((((2.010_334_399_292_288e-7 * r + 2.711_555_568_743_487_6e-5) * r
            + 1.242_660_947_388_078_4e-3)
            * r
            + 2.653_218_952_657_612_4e-2)
            * r
            + 2.965_605_718_285_048_7e-1)
            * r
            + 1.784_826_539_917_291_3)
            * r
            + 5.463_784_911_164_114)
            * r
            + 6.657_904_643_501_103;
        let den = ((((((2.044_263_103_389_939_7e-15 * r + 1.421_511_758_316_446e-7) * r
            + 1.846_318_317_510_054_8e-5)
            * r
            + 7.868_691_311_456_133e-4)
            * r
            + 1.487_536_129_085_061_5e-2)
            * r
            + 1.369_298_809_227_358e-1)
            * r
            + 5.998_322_065_558_88e-1)
            * r
            + 1.0;
        num / den
    };
    if q < 0.0 {
        -val
    } else {
        val
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn center_values() {
        let (cdf, pdf) = std_normal(0.0).unwrap();
        assert_eq!(cdf, 0.5);
        assert!((pdf - 0.398_942_280_4).abs() < 1e-10);
        assert!((pdf - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-16);
    }

    #[test]
    fn two_sided_five_percent_point() {
        assert!((norm_cdf(1.959964) - 0.975).abs() < 1e-6);
    }

    #[test]
    fn symmetry() {
        for i in 0..=400 {
            let x = i as f64 * 0.05;
            assert!((norm_cdf(-x) - (1.0 - norm_cdf(x))).abs() <= 1e-14, "x = {x}");
        }
    }

    #[test]
    fn nan_is_rejected() {
        assert!(std_normal(f64::NAN).is_err());
    }

    #[test]
    fn quantile_matches_high_precision_reference() {
        // Reference values computed with 40-digit arithmetic.
        let cases = [
            (0.975, 1.959_963_984_540_054),
            (0.9975, 2.807_033_768_343_804),
            (0.5, 0.0),
            (1e-10, -6.361_340_902_404_056),
            (0.05, -1.644_853_626_951_472_7),
        ];
        for (p, want) in cases {
            let got = norm_quantile(p);
            assert!((got - want).abs() <= 1e-13 * (1.0 + want.abs()), "p={p}: {got} vs {want}");
        }
    }

    #[test]
    fn quantile_round_trip() {
        let mut p = 1e-12;
        while p < 1.0 - 1e-12 {
            let back = norm_cdf(norm_quantile(p));
            assert!((back - p).abs() <= 1e-12, "p = {p}: {back}");
            p = if p < 0.01 { p * 1.7 } else if p < 0.99 { p + 0.001 } else { 1.0 - (1.0 - p) / 1.7 };
        }
    }

    #[test]
    fn quantile_edges() {
        assert_eq!(norm_quantile(0.0), f64::NEG_INFINITY);
        assert_eq!(norm_quantile(1.0), f64::INFINITY);
        assert!(norm_quantile(1.5).is_nan());
    }

    #[test]
    fn far_left_ratio_is_continuous() {
        let below = pdf_over_cdf(-30.000_001);
        let above = pdf_over_cdf(-29.999_999);
        assert!((below - above).abs() / above < 1e-6);
    }
}
