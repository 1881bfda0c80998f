//! Standard normal density, distribution and quantile functions.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Standard normal density.
#[inline]
pub fn norm_pdf<T: Real>(z: T) -> T {
    let half = T::lit(0.5);
    (-(half * z * z)).exp() / (T::TAU()).sqrt()
}

/// Standard normal CDF Φ(z), computed from `erfc` so both tails keep full
/// relative precision. Saturates to exactly 0 or 1 far in the tails.
#[inline]
pub fn norm_cdf<T: Real>(z: T) -> T {
    T::lit(0.5) * (-z * T::FRAC_1_SQRT_2()).erfc()
}

/// Upper tail 1 − Φ(z) without cancellation.
#[inline]
pub fn norm_sf<T: Real>(z: T) -> T {
    T::lit(0.5) * (z * T::FRAC_1_SQRT_2()).erfc()
}

// Rational approximation of the normal quantile on the central region and on
// the tails, relative accuracy about 1e-9 before refinement.
const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383_577_518_672_69e2,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const P_LOW: f64 = 0.02425;

fn initial_quantile(p: f64) -> f64 {
    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -initial_quantile(1.0 - p)
    }
}

/// Inverse of [`norm_cdf`].
///
/// The rational starting point is polished with Halley steps on the tail that
/// `p` lies in, so `|Φ(z) − p|` is at the rounding floor of `T`.
pub fn norm_quantile<T: Real>(p: T) -> Result<T> {
    if !(p > T::zero() && p < T::one()) {
        return Err(Error::InvalidProbability { value: p.as_f64() });
    }
    let half = T::lit(0.5);
    let mut z = T::lit(initial_quantile(p.as_f64()));
    let upper = p > half;
    // 1 − p is exact for p ≥ 1/2.
    let q = T::one() - p;
    for _ in 0..3 {
        // residual e = Φ(z) − p, evaluated on the tail that avoids cancellation
        let e = if upper { q - norm_sf(z) } else { norm_cdf(z) - p };
        if e == T::zero() {
            break;
        }
        let u = e / norm_pdf(z);
        let step = u / (T::one() + half * z * u);
        z = z - step;
        if step.abs() <= T::epsilon() * z.abs().max(T::one()) {
            break;
        }
    }
    Ok(z)
}

/// One-sided critical value Φ⁻¹(1 − size), computed as −Φ⁻¹(size) so small
/// sizes keep their precision.
pub fn critical_value<T: Real>(size: T) -> Result<T> {
    norm_quantile(size).map(|z| -z)
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 40 digits, evaluated at the exact binary value of each input
    const CDF_ORACLE: &[(f64, f64)] = &[
        (1.6448536, 0.949_999_997_220_342_5),
        (-1.6448536, 0.050_000_002_779_657_46),
        (0.5, 0.691_462_461_274_013_1),
        (-3.0, 0.001_349_898_031_630_094_5),
        (-7.5, 3.190_891_672_910_896e-14),
        (2.0, 0.977_249_868_051_820_8),
        (5.0, 0.999_999_713_348_428_1),
        (-10.0, 7.619_853_024_160_526e-24),
    ];

    const QUANTILE_ORACLE: &[(f64, f64)] = &[
        (0.95, 1.644_853_626_951_472_7),
        (0.99, 2.326_347_874_040_841),
        (0.02, -2.053_748_910_631_823),
        (0.9, 1.281_551_565_544_600_5),
        (1e-10, -6.361_340_902_404_056),
        (0.999999, 4.753_424_308_817_088),
    ];

    #[test]
    fn cdf_matches_high_precision_values() {
        assert_eq!(norm_cdf(0.0_f64), 0.5);
        for &(z, want) in CDF_ORACLE {
            let got = norm_cdf(z);
            assert!((got - want).abs() <= 1e-12, "z={z}: {got} vs {want}");
            // tails should also be right in relative terms
            if want < 1e-3 {
                assert!(((got - want) / want).abs() < 1e-12, "rel z={z}");
            }
        }
    }

    #[test]
    fn cdf_saturates() {
        assert_eq!(norm_cdf(-40.0_f64), 0.0);
        assert_eq!(norm_cdf(40.0_f64), 1.0);
        assert_eq!(norm_sf(40.0_f64), 0.0);
    }

    #[test]
    fn quantile_matches_high_precision_values() {
        assert_eq!(norm_quantile(0.5_f64).unwrap(), 0.0);
        for &(p, want) in QUANTILE_ORACLE {
            let got = norm_quantile(p).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "p={p}: {got} vs {want}"
            );
            assert!((norm_cdf(got) - p).abs() <= 1e-12);
        }
    }

    #[test]
    fn quantile_rejects_degenerate_levels() {
        for p in [0.0, 1.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(norm_quantile(p), Err(Error::InvalidProbability { .. })));
        }
    }

    #[test]
    fn roundtrip_on_bounded_range() {
        // Below zero Φ(z) carries full relative precision and the round trip
        // is good to 1e-9 all the way to -6.
        let mut z = -6.0_f64;
        while z <= 0.0 {
            let back = norm_quantile(norm_cdf(z)).unwrap();
            assert!((back - z).abs() < 1e-9, "z={z} back={back}");
            z += 0.01;
        }
        // Above zero Φ(z) is stored with absolute spacing 2^-53, which moves
        // the quantile by up to ulp/φ(z) (about 2e-8 at z = 6).
        let mut z = 0.0_f64;
        while z <= 6.0 {
            let back = norm_quantile(norm_cdf(z)).unwrap();
            let floor = f64::EPSILON / norm_pdf(z);
            assert!((back - z).abs() < 1e-9 + floor, "z={z} back={back}");
            z += 0.01;
        }
    }

    #[test]
    fn single_precision_is_usable() {
        let z = norm_quantile(0.95_f32).unwrap();
        assert!((z - 1.644_853_6).abs() < 1e-5);
        assert!((norm_cdf(1.644_853_6_f32) - 0.95).abs() < 1e-6);
    }

    #[test]
    fn critical_value_is_upper_quantile() {
        let t = critical_value(0.05_f64).unwrap();
        assert!((t - 1.644_853_626_951_472_7).abs() < 1e-13);
    }
}
