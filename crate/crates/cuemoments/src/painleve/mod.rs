//! Tau functions and their Painlevé equations.
//!
//! In the limit the characteristic function of `q_1(s)` is, for `s ∈ ℕ`,
//!
//! ```text
//! φ_s(t) = (-1)^{s(s-1)/2} 2^{-s²/2} G(2s+1)/G(s+1)² · det[I_{j+k+1}(2√(2t))] / (e^{t} t^{s²/2})
//! ```
//!
//! and `τ(t) = t d/dt log φ_s(t/2)` solves σ-Painlevé III′. At finite `N` the
//! analogous `τ_N` is rational in `t` and solves a Painlevé V equation.

pub mod fractional;
pub mod special;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{factorial, rat, ratio, Rational};
use crate::algebra::series::series_logderiv;
use crate::algebra::{Poly, PowerSeries, RationalFunction};
use crate::error::{Error, Result};
use crate::hankel::{hankel_det, Partition};

pub use fractional::{fractional_moment_q1, QuadConfig};
pub use special::{barnes_g, barnes_g_int, bessel_i, log_barnes_g};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TauRepr {
    /// Rational function of `t` at finite `N`.
    Exact(RationalFunction),
    /// Truncated power series in `t` for the limit.
    #[serde(skip)]
    Series(PowerSeries),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauFunction {
    /// `None` for the limit.
    pub big_n: Option<usize>,
    pub s: usize,
    pub repr: TauRepr,
}

/// `det` of a small matrix of series by permutation expansion.
fn det_series(m: &[Vec<PowerSeries>], order: usize) -> PowerSeries {
    fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
        if n == 0 {
            return vec![(vec![], false)];
        }
        let mut out = Vec::new();
        for (p, odd) in perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push((q, odd ^ ((n - 1 - pos) % 2 == 1)));
            }
        }
        out
    }
    let n = m.len();
    let mut acc = PowerSeries::zero(order);
    for (p, odd) in perms(n) {
        let mut term = PowerSeries::one(order);
        for (i, &j) in p.iter().enumerate() {
            term = &term * &m[i][j];
        }
        acc = if odd { &acc - &term } else { &acc + &term };
    }
    acc
}

/// Exact power series of `φ_s` to order `k`, for `t ≥ 0`.
///
/// Entries are expanded in `w = √(2t)`: `I_ν(2w) = Σ_m w^{ν+2m}/(m!(m+ν)!)`.
/// The determinant must have valuation `s²` in `w` and, after division,
/// only even powers of `w`; anything else is reported.
pub fn phi_series(s: usize, k: usize) -> Result<PowerSeries> {
    if s == 0 {
        return Err(Error::Unsupported("φ_s needs integer s ≥ 1".into()));
    }
    let sq = s * s;
    let wk = 2 * k + sq + 1;
    let bessel = |nu: usize| -> PowerSeries {
        let mut c = vec![Rational::zero(); wk + 1];
        let mut m = 0;
        while nu + 2 * m <= wk {
            c[nu + 2 * m] = Rational::new(BigInt::one(), factorial(m as u64) * factorial((m + nu) as u64));
            m += 1;
        }
        PowerSeries::new(c, wk)
    };
    let mat: Vec<Vec<PowerSeries>> = (0..s).map(|j| (0..s).map(|l| bessel(j + l + 1)).collect()).collect();
    let det = det_series(&mat, wk);
    if (0..sq).any(|i| !det.coeff(i).is_zero()) {
        return Err(Error::ResidualHalfIntegerPowers(0));
    }
    // divide by w^{s²}: the t^{s²/2} and 2^{s²/2} factors combine to exactly this
    let mut coeffs = Vec::with_capacity(k + 1);
    for n in 0..=k {
        if !det.coeff(sq + 2 * n + 1).is_zero() && 2 * n + 1 + sq <= wk {
            return Err(Error::ResidualHalfIntegerPowers(n));
        }
        // w^{2n} = (2t)^n
        coeffs.push(det.coeff(sq + 2 * n) * Rational::from_integer(num_traits::pow(BigInt::from(2), n)));
    }
    let core = PowerSeries::new(coeffs, k);
    let exp_minus = PowerSeries::new(
        (0..=k)
            .map(|n| Rational::new(if n % 2 == 0 { BigInt::one() } else { -BigInt::one() }, factorial(n as u64)))
            .collect(),
        k,
    );
    let g = |n: usize| barnes_g_int(n);
    let gs = g(s + 1);
    let mut c = Rational::new(g(2 * s + 1), &gs * &gs);
    if (s * (s - 1) / 2) % 2 == 1 {
        c = -c;
    }
    Ok((&core * &exp_minus).scale(&c))
}

/// `τ(t) = t d/dt log φ_s(t/2)` as a series to order `k`.
pub fn tau_limit(s: usize, k: usize) -> Result<TauFunction> {
    let phi = phi_series(s, k)?.rescale_arg(&ratio(1, 2));
    Ok(TauFunction { big_n: None, s, repr: TauRepr::Series(series_logderiv(&phi)?) })
}

/// `(tτ″)² + 4t(τ′)³ - (4s² + 4τ)(τ′)² - tτ′ + τ` for a series `τ`; the result
/// is exact through order `K - 2`.
pub fn sigma_p3_residual_series(tau: &PowerSeries, s: usize) -> PowerSeries {
    let k = tau.order();
    let d1 = tau.derivative();
    let d2 = d1.derivative();
    let t = PowerSeries::t(k);
    let td2 = &t * &d2;
    let d1sq = &d1 * &d1;
    let s2 = rat(4 * (s * s) as i64);
    let four_s2_plus = &PowerSeries::one(k).scale(&s2) + &tau.scale(&rat(4));
    let cube = (&t * &(&d1sq * &d1)).scale(&rat(4));
    let r = &(&(&(&td2 * &td2) + &cube) - &(&four_s2_plus * &d1sq)) - &(&t * &d1);
    (&r + tau).truncate(k.saturating_sub(2))
}

pub fn sigma_p3_residual(tau: &TauFunction) -> Result<PowerSeries> {
    match &tau.repr {
        TauRepr::Series(p) => Ok(sigma_p3_residual_series(p, tau.s)),
        TauRepr::Exact(_) => Err(Error::Unsupported("σ-PIII′ residual takes the limiting series".into())),
    }
}

/// `τ_N(t) = -t/2 + t D̃′(t)/D̃(t)` where `Ψ_N(u) = e^{-Nu} D(u)` and `D̃(t) = D(t/(2N))`.
pub fn tau_finite_n(big_n: usize, s: usize) -> Result<TauFunction> {
    if big_n == 0 || s == 0 {
        return Err(Error::Unsupported("finite-N tau needs N ≥ 1 and integer s ≥ 1".into()));
    }
    let d = hankel_det(big_n, s, &Partition::empty(), 0)?.value.poly.rescale_arg(&ratio(1, 2 * big_n as i64));
    let log_part = RationalFunction::new(&Poly::x() * &d.derivative(), d)?;
    let tau = &log_part - &RationalFunction::from_poly(Poly::linear(ratio(1, 2), rat(0)));
    Ok(TauFunction { big_n: Some(big_n), s, repr: TauRepr::Exact(tau) })
}

/// `(tτ″)² + 4t(τ′)³ - (4s² + 4τ + t²/N²)(τ′)² - t(1 + 2s/N - 2τ/N²)τ′ + (1 + 2s/N - τ/N²)τ`.
pub fn painleve5_residual(tau: &RationalFunction, big_n: usize, s: usize) -> RationalFunction {
    let n = rat(big_n as i64);
    let n2 = &n * &n;
    let inv_n2 = Rational::one() / &n2;
    let t = RationalFunction::var();
    let d1 = tau.derivative();
    let d2 = d1.derivative();
    let c = |r: Rational| RationalFunction::constant(r);
    let td2 = &t * &d2;
    let d1sq = &d1 * &d1;
    let one_2s = Rational::one() + rat(2 * s as i64) / &n;
    let a = &(&c(rat(4 * (s * s) as i64)) + &tau.scale(&rat(4))) + &(&t * &t).scale(&inv_n2);
    let b = &c(one_2s.clone()) - &tau.scale(&(rat(2) * &inv_n2));
    let e = &c(one_2s) - &tau.scale(&inv_n2);
    let mut r = &td2 * &td2;
    r = &r + &(&t * &(&d1sq * &d1)).scale(&rat(4));
    r = &r - &(&a * &d1sq);
    r = &r - &(&t * &(&b * &d1));
    &r + &(&e * tau)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_one() {
        let p = phi_series(1, 6).unwrap();
        assert_eq!(p.coeff(0), rat(1));
        assert_eq!(p.coeff(1), rat(0));
        assert_eq!(p.coeff(2), ratio(-1, 6));
        // φ_s is even in |t| with finite moments below order 2s+1, so the first
        // odd power of |t| appearing is |t|^{2s+1}
        for s in 1..=3 {
            let p = phi_series(s, 9).unwrap();
            assert_eq!(p.coeff(0), rat(1));
            assert!((1..2 * s + 1).filter(|n| n % 2 == 1).all(|n| p.coeff(n).is_zero()));
            assert!(!p.coeff(2 * s + 1).is_zero());
        }
    }

    #[test]
    fn tau_limit_start() {
        let TauRepr::Series(t) = tau_limit(1, 8).unwrap().repr else { panic!() };
        assert_eq!(t.coeff(0), rat(0));
        assert_eq!(t.coeff(1), rat(0));
        assert_eq!(t.coeff(2), ratio(-1, 12));
    }

    #[test]
    fn sigma_residual_vanishes() {
        for s in 1..=2 {
            let tau = tau_limit(s, 14).unwrap();
            let r = sigma_p3_residual(&tau).unwrap();
            assert_eq!(r.order(), 12);
            assert!(r.coeffs().iter().all(Zero::is_zero), "s={s}");
        }
        let zero = PowerSeries::zero(8);
        assert!(sigma_p3_residual_series(&zero, 0).coeffs().iter().all(Zero::is_zero));
    }

    #[test]
    fn finite_tau_closed_form() {
        let TauRepr::Exact(t) = tau_finite_n(1, 1).unwrap().repr else { panic!() };
        let want = RationalFunction::new(Poly::from_ints(&[0, 0, -1]), Poly::from_ints(&[4, 2])).unwrap();
        assert_eq!(t, want);
        assert!(painleve5_residual(&t, 1, 1).is_zero());
    }

    #[test]
    fn finite_tau_solves_pv() {
        for n in 1..=3 {
            for s in 1..=2 {
                let TauRepr::Exact(t) = tau_finite_n(n, s).unwrap().repr else { panic!() };
                assert!(t.eval(&rat(0)).unwrap().is_zero());
                assert!(painleve5_residual(&t, n, s).is_zero(), "N={n} s={s}");
            }
        }
    }
}
