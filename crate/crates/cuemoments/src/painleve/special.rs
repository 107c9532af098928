//! Modified Bessel `I_ν` and the Barnes G-function.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use statrs::function::gamma::ln_gamma;

use crate::algebra::rational::{factorial, from_f64, to_f64, Rational};
use crate::error::{Error, Result};

/// Decimal digits an `f64` result can carry.
pub const F64_DIGITS: u32 = 15;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `I_ν(z) = Σ_m (z/2)^{ν+2m} / (m!(m+ν)!)`, summed in exact arithmetic until the
/// geometric tail bound falls below `10^{-digits}` relative to the partial sum.
pub fn bessel_i(nu: u32, z: f64, digits: u32) -> Result<f64> {
    if digits > F64_DIGITS {
        return Err(Error::PrecisionUnachievable(digits));
    }
    let Some(zr) = from_f64(z) else {
        return Err(Error::Unsupported(format!("non-finite argument {z}")));
    };
    if zr.is_zero() {
        return Ok(if nu == 0 { 1.0 } else { 0.0 });
    }
    let half = &zr / Rational::from_integer(BigInt::from(2));
    let h2 = &half * &half;
    let eps = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(10), digits as usize + 2));
    let mut term = num_traits::pow(half.clone(), nu as usize) / Rational::from_integer(factorial(nu as u64));
    let mut sum = term.clone();
    for m in 0..100_000u64 {
        let denom = Rational::from_integer(BigInt::from((m + 1) * (m + 1 + nu as u64)));
        let ratio = &h2 / &denom;
        term = &term * &ratio;
        sum += &term;
        // remaining terms shrink at least geometrically with this ratio
        if ratio < Rational::new(BigInt::one(), BigInt::from(2)) {
            let tail = &term * &ratio / (Rational::one() - &ratio);
            if tail.abs() <= &eps * sum.abs() {
                return Ok(to_f64(&sum));
            }
        }
    }
    Err(Error::PrecisionUnachievable(digits))
}

/// `G(k)` for a positive integer `k`, from `G(1) = 1`, `G(z+1) = Γ(z)G(z)`.
pub fn barnes_g_int(k: usize) -> BigInt {
    if k == 0 {
        return BigInt::zero();
    }
    (1..k).fold(BigInt::one(), |g, z| g * factorial(z as u64 - 1))
}

/// Number of factors taken explicitly in the product formula.
const PRODUCT_TERMS: usize = 100_000;

/// `Σ_{k>J} k^{-p}` by Euler–Maclaurin to three terms.
fn zeta_tail(p: f64, j: f64) -> f64 {
    j.powf(1.0 - p) / (p - 1.0) - 0.5 * j.powf(-p) + p / 12.0 * j.powf(-p - 1.0)
}

/// `log G(1+z)` from the Weierstrass product
/// `G(1+z) = (2π)^{z/2} e^{-(z+z²(1+γ))/2} ∏_k (1+z/k)^k e^{z²/(2k)-z}`, `z > -1`.
///
/// The first `J = 10^5` factors are summed; the remainder uses
/// `k log(1+z/k) + z²/(2k) - z = z³/(3k²) - z⁴/(4k³) + z⁵/(5k⁴) + O(k^{-5})`.
pub fn log_barnes_g_product(z: f64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for k in 1..=PRODUCT_TERMS {
        let kf = k as f64;
        let term = kf * (z / kf).ln_1p() + z * z / (2.0 * kf) - z;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let j = PRODUCT_TERMS as f64;
    let tail =
        z.powi(3) / 3.0 * zeta_tail(2.0, j) - z.powi(4) / 4.0 * zeta_tail(3.0, j) + z.powi(5) / 5.0 * zeta_tail(4.0, j);
    0.5 * z * (2.0 * std::f64::consts::PI).ln() - 0.5 * (z + z * z * (1.0 + EULER_GAMMA)) + sum + tail
}

/// `G(x)` by the product formula alone.
pub fn barnes_g_product(x: f64) -> f64 {
    log_barnes_g_product(x - 1.0).exp()
}

/// `log G(x)` for `x > 0`: shifts into `(0, 2]` with `log G(x) = log Γ(x-1) + log G(x-1)`,
/// then applies the product formula.
pub fn log_barnes_g(x: f64) -> f64 {
    let mut x = x;
    let mut acc = 0.0;
    while x > 2.0 {
        acc += ln_gamma(x - 1.0);
        x -= 1.0;
    }
    acc + log_barnes_g_product(x - 1.0)
}

/// `G(x)` for `x > 0`, exact at integers.
pub fn barnes_g(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..171.0).contains(&x) {
        return to_f64(&Rational::from_integer(barnes_g_int(x as usize)));
    }
    log_barnes_g(x).exp()
}

/// `C_p` in `|y|^p = C_p ∫_0^∞ (1 - cos ty) t^{-p-1} dt`, `0 < p < 2`:
/// `C_p = p / (Γ(1-p) cos(πp/2))`, with the limit `2/π` at `p = 1`.
pub fn fractional_constant(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 2.0) {
        return Err(Error::Unsupported(format!("p = {p} outside (0, 2)")));
    }
    if (p - 1.0).abs() < 1e-12 {
        return Ok(2.0 / std::f64::consts::PI);
    }
    let g = statrs::function::gamma::gamma(1.0 - p);
    Ok(p / (g * (std::f64::consts::FRAC_PI_2 * p).cos()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        assert_eq!(bessel_i(0, 0.0, 15).unwrap(), 1.0);
        let z = 1e-6;
        assert!((bessel_i(1, z, 15).unwrap() / (0.5 * z) - 1.0).abs() < 1e-10);
        // I_1(2) = Σ 1/(m!(m+1)!)
        let mut want = 0.0;
        let mut f = 1.0;
        for m in 0..40u32 {
            if m > 0 {
                f *= m as f64;
            }
            want += 1.0 / (f * f * (m as f64 + 1.0));
        }
        assert!((bessel_i(1, 2.0, 15).unwrap() - want).abs() < 1e-14);
        assert!(matches!(bessel_i(1, 2.0, 40), Err(Error::PrecisionUnachievable(40))));
    }

    #[test]
    fn barnes_integers() {
        assert_eq!(barnes_g_int(1), BigInt::one());
        assert_eq!(barnes_g_int(3), BigInt::one());
        assert_eq!(barnes_g_int(5), BigInt::from(12));
        assert_eq!(barnes_g(5.0), 12.0);
        assert!((barnes_g_product(3.0) - 1.0).abs() < 1e-6);
        assert!((barnes_g_product(2.0) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn barnes_recurrence() {
        for z in [1.5, 2.5] {
            let r = barnes_g(z + 1.0) / barnes_g(z);
            assert!((r - statrs::function::gamma::gamma(z)).abs() < 1e-8, "z={z}");
            let r2 = barnes_g_product(z + 1.0) / barnes_g_product(z);
            assert!((r2 - statrs::function::gamma::gamma(z)).abs() < 1e-8, "z={z}");
        }
        // G(1/2) = 2^{1/24} e^{1/8} π^{-1/4} A^{-3/2}
        let glaisher = 1.282_427_129_100_622_6f64;
        let want = 2f64.powf(1.0 / 24.0) * (0.125f64).exp() * std::f64::consts::PI.powf(-0.25) * glaisher.powf(-1.5);
        assert!((barnes_g(0.5) - want).abs() < 1e-10);
    }

    #[test]
    fn fractional_constant_limits() {
        let c1 = fractional_constant(1.0).unwrap();
        assert!((fractional_constant(1.0 + 1e-7).unwrap() - c1).abs() < 1e-6);
        assert!(fractional_constant(2.5).is_err());
    }
}
