//! Characteristic-function ratios and the finite-`N` differential relations
//! built from them.
//!
//! For `u > 0`,
//!
//! ```text
//! E_N[e^{-iuΣx} ∏_q P_q^{ℓ_q}] / E_N[e^{-iuΣx}] = (-2i)^{Σqℓ_q} M_ℓ(u) / Ψ_N(u),
//! P_q = Σ_j (x_j - i)^q,
//! ```
//!
//! where `M_ℓ` is [`mixed_derivative`](super::mixed_derivative). Quantities
//! indexed by `t_1` use `u = t_1/N`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{binomial, factorial, rat, ratio, Rational};
use crate::algebra::{ExpPolyFunction, Poly};
use crate::error::{Error, Result};

use super::{hankel_det, mixed_derivative, DerivativeOrders, Partition};

/// Ratios are evaluated at `u = t_1/N`.
pub const ARGUMENT_DIVIDED_BY_N: bool = true;

/// `re + i·im` with exact parts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRational {
    #[serde(serialize_with = "crate::algebra::rational::serialize_rational")]
    #[serde(deserialize_with = "crate::algebra::rational::deserialize_rational")]
    pub re: Rational,
    #[serde(serialize_with = "crate::algebra::rational::serialize_rational")]
    #[serde(deserialize_with = "crate::algebra::rational::deserialize_rational")]
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexRational { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        ComplexRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(ComplexRational::real(Rational::one()), |acc, _| &acc * self)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (crate::algebra::rational::to_f64(&self.re), crate::algebra::rational::to_f64(&self.im))
    }
}

impl Add for &ComplexRational {
    type Output = ComplexRational;
    fn add(self, o: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Mul for &ComplexRational {
    type Output = ComplexRational;
    fn mul(self, o: &ComplexRational) -> ComplexRational {
        ComplexRational { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

fn weight(orders: &DerivativeOrders) -> usize {
    orders.iter().map(|(q, l)| q * l).sum()
}

fn minus_two_i_pow(e: usize) -> ComplexRational {
    ComplexRational::new(rat(0), rat(-2)).pow(e)
}

/// `E_N[e^{-i t_1 Σx/N} ∏_q P_q^{ℓ_q}] / E_N[e^{-i t_1 Σx/N}]` at `t_1 = t0 > 0`.
pub fn normalized_l(big_n: usize, s: usize, orders: &DerivativeOrders, t0: &Rational) -> Result<ComplexRational> {
    if *t0 <= Rational::zero() {
        return Err(Error::ConstraintViolation("t0 must be positive".into()));
    }
    let u = t0 / rat(big_n as i64);
    let psi = hankel_det(big_n, s, &Partition::empty(), 0)?.value.poly.eval(&u);
    let m = mixed_derivative(big_n, s, orders)?.poly.eval(&u);
    let ratio = m / psi;
    let p = minus_two_i_pow(weight(orders));
    Ok(ComplexRational::new(&p.re * &ratio, &p.im * &ratio))
}

/// Real normalization `N^{-Σℓ_q} M_ℓ(t0/N)/Ψ_N(t0/N)`.
pub fn mixed_derivative_normalized(
    big_n: usize,
    s: usize,
    orders: &DerivativeOrders,
    t0: &Rational,
) -> Result<Rational> {
    let u = t0 / rat(big_n as i64);
    let psi = hankel_det(big_n, s, &Partition::empty(), 0)?.value.poly.eval(&u);
    let m = mixed_derivative(big_n, s, orders)?.poly.eval(&u);
    let count: usize = orders.values().sum();
    Ok(m / psi / Rational::from_integer(num_traits::pow(BigInt::from(big_n), count)))
}

/// `E_N[e^{-iTΣx/N} ∏ P_q^{ℓ_q}]` as a function of `T`, up to the constant `Ψ_N(0)`.
fn expectation_in_t1(big_n: usize, s: usize, orders: &DerivativeOrders) -> Result<(ExpPolyFunction, ComplexRational)> {
    let m = mixed_derivative(big_n, s, orders)?.poly.rescale_arg(&ratio(1, big_n as i64));
    Ok((ExpPolyFunction::new(1, m), minus_two_i_pow(weight(orders))))
}

/// `2T·(lhs - rhs)·e^{T}` for
/// `E[e^{-iTΣx/N} Σ(x_j-i)^2] = -(4N(Ns-T)/(2T)) dE_0/dT - 2N E_0`.
pub fn first_relation_residual(big_n: usize, s: usize) -> Result<Poly> {
    let (n, si) = (big_n as i64, s as i64);
    let (e0, _) = expectation_in_t1(big_n, s, &DerivativeOrders::new())?;
    let mut ord = DerivativeOrders::new();
    ord.insert(2, 1);
    let (e2, c) = expectation_in_t1(big_n, s, &ord)?;
    debug_assert!(c.im.is_zero());
    let two_t = Poly::from_ints(&[0, 2]);
    let lhs = (&two_t * &e2.poly).scale(&c.re);
    let rhs = &(&Poly::from_ints(&[-4 * n * n * si, 4 * n]) * &e0.derivative().poly)
        - &(&Poly::from_ints(&[0, 4 * n]) * &e0.poly);
    Ok(&lhs - &rhs)
}

/// Gaussian-rational combination of `∏ P_q` keyed by the sorted multiset of `q`.
type PCombination = BTreeMap<Vec<usize>, ComplexRational>;

/// `p_k = Σ_j x_j^k = Σ_r C(k,r) i^{k-r} P_r` with `P_0 = N`.
fn power_sum_in_p(k: usize, big_n: usize) -> PCombination {
    let mut out = PCombination::new();
    for r in 0..=k {
        let c = ComplexRational::i().pow(k - r);
        let b = Rational::from_integer(binomial(k as i64, r as i64));
        let scale = if r == 0 { b * rat(big_n as i64) } else { b };
        let key = if r == 0 { vec![] } else { vec![r] };
        let term = ComplexRational::new(&c.re * &scale, &c.im * &scale);
        let e = out.entry(key).or_insert_with(|| ComplexRational::real(Rational::zero()));
        *e = &*e + &term;
    }
    out
}

fn combine(a: &PCombination, b: &PCombination) -> PCombination {
    let mut out = PCombination::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let mut k: Vec<usize> = ka.iter().chain(kb).copied().collect();
            k.sort_unstable();
            let e = out.entry(k).or_insert_with(|| ComplexRational::real(Rational::zero()));
            *e = &*e + &(ca * cb);
        }
    }
    out
}

/// `T^3 N^4 (lhs - rhs) e^{T}`, real and imaginary parts, for the relation
///
/// ```text
/// N^{-4} E[e^{-iTΣx/N} p_2^2] = (4s²+2)/T² E_0'' + (4s/(NT) - 12s²/T³) E_0'
///                              + (1/N² - 2/T² - 4s/(N²T²)) E_0.
/// ```
///
/// The left side is entire in `T` while the right side carries a `T^{-3}`
/// singularity unless `N = 1`; the residual is zero only at `N = 1`.
pub fn second_relation_residual(big_n: usize, s: usize) -> Result<(Poly, Poly)> {
    let (n, si) = (big_n as i64, s as i64);
    let p2 = power_sum_in_p(2, big_n);
    let comb = combine(&p2, &p2);
    let mut re = Poly::zero();
    let mut im = Poly::zero();
    let t3 = Poly::monomial(rat(1), 3);
    for (key, c) in &comb {
        let mut ord = DerivativeOrders::new();
        for &q in key {
            *ord.entry(q).or_insert(0) += 1;
        }
        let (e, p) = expectation_in_t1(big_n, s, &ord)?;
        let coef = &p * c;
        let base = &t3 * &e.poly;
        re = &re + &base.scale(&coef.re);
        im = &im + &base.scale(&coef.im);
    }
    let (e0, _) = expectation_in_t1(big_n, s, &DerivativeOrders::new())?;
    let d1 = e0.derivative();
    let d2 = d1.derivative();
    let n2 = n * n;
    let n4 = rat(n2 * n2);
    // N^4 T^3 times each coefficient
    let c2 = Poly::from_ints(&[0, 4 * si * si + 2]).scale(&n4);
    let c1 = &Poly::from_ints(&[-12 * si * si, 0, 0]).scale(&n4) + &Poly::from_ints(&[0, 0, 4 * si * n * n2]);
    let c0 = Poly::from_ints(&[0, -2 * n2 * n2 - 4 * si * n2, 0, n2]);
    let rhs = &(&(&c2 * &d2.poly) + &(&c1 * &d1.poly)) + &(&c0 * &e0.poly);
    Ok((&re - &rhs, im))
}

fn check_expansion_indices(h: &[usize], h_prime: &[usize], i: usize, j: usize) -> Result<usize> {
    let k = h.len() + 1;
    if k < 3 {
        return Err(Error::ConstraintViolation("need h_2..h_k with k ≥ 3".into()));
    }
    if h_prime.len() != k - 3 {
        return Err(Error::ConstraintViolation(format!("expected {} primed indices h_3'..h_{{k-1}}'", k - 3)));
    }
    if i == 0 || j + 1 > i {
        return Err(Error::ConstraintViolation(format!("need 0 ≤ j ≤ i-1, got i={i}, j={j}")));
    }
    if h.iter().sum::<usize>() != i - 1 - j {
        return Err(Error::ConstraintViolation("h_2 + … + h_k must equal i-1-j".into()));
    }
    if h_prime.iter().zip(&h[1..]).any(|(p, q)| p > q) {
        return Err(Error::ConstraintViolation("need h_n' ≤ h_n".into()));
    }
    Ok(k)
}

/// Counts `c_l`, `l = 1..k-2`, of factors carrying index `l` in the expansion.
fn group_counts(h: &[usize], h_prime: &[usize]) -> Vec<usize> {
    let k = h.len() + 1;
    // h[n-2] = h_n, h_prime[n-3] = h_n'
    let hp = |n: usize| if (3..k).contains(&n) { h_prime[n - 3] } else { 0 };
    let hn = |n: usize| h[n - 2];
    if k == 3 {
        return vec![hn(2) + hn(3)];
    }
    let mut c = Vec::with_capacity(k - 2);
    c.push(hn(2) + hp(3));
    for n in 3..=k - 2 {
        c.push(hn(n) - hp(n) + hp(n + 1));
    }
    c.push(hn(k - 1) - hp(k - 1) + hn(k));
    c
}

/// `a^{(i,j)}_{h_2, h_3', …, h_{k-1}', h_k}
///  = (i-1-j)! (-1)^{h_3'+…+h_{k-1}'+h_k} / ((h_2+h_3')! (h_{k-1}-h_{k-1}'+h_k)! ∏_{n=3}^{k-2} (h_n-h_n'+h_{n+1}')!)`.
///
/// `h` holds `h_2..h_k` and `h_prime` holds `h_3'..h_{k-1}'`. For `k = 3` the
/// two outer factorials describe the same group and are taken once.
pub fn expansion_coeff(h: &[usize], h_prime: &[usize], i: usize, j: usize) -> Result<Rational> {
    let k = check_expansion_indices(h, h_prime, i, j)?;
    let mut den = BigInt::one();
    for c in group_counts(h, h_prime) {
        den *= factorial(c as u64);
    }
    let odd = (h_prime.iter().sum::<usize>() + h[k - 2]) % 2 == 1;
    let num = factorial((i - 1 - j) as u64);
    Ok(Rational::new(if odd { -num } else { num }, den))
}

/// Brute-force collection of `∏_{n=1}^{M} ((l_n+1)t_{l_n+1} - (l_n+2)t_{l_n+2})`
/// summed over `l_n ∈ 1..k-2`: coefficient of `∏(n t_n)^{h_n}` with `h_n'` of the
/// `t_n` factors (`3 ≤ n ≤ k-1`) coming from the subtracted terms.
pub fn collected_expansion(k: usize, factors: usize) -> BTreeMap<(Vec<usize>, Vec<usize>), BigInt> {
    let mut acc: BTreeMap<(Vec<usize>, Vec<usize>), BigInt> = BTreeMap::new();
    acc.insert((vec![0; k - 1], vec![0; k.saturating_sub(3)]), BigInt::one());
    for _ in 0..factors {
        let mut next = BTreeMap::new();
        for ((h, hp), c) in &acc {
            for l in 1..=k - 2 {
                let mut h1 = h.clone();
                h1[l - 1] += 1;
                *next.entry((h1, hp.clone())).or_insert_with(BigInt::zero) += c;
                let mut h2 = h.clone();
                let mut hp2 = hp.clone();
                let n = l + 2;
                h2[n - 2] += 1;
                if n < k {
                    hp2[n - 3] += 1;
                }
                *next.entry((h2, hp2)).or_insert_with(BigInt::zero) -= c;
            }
        }
        acc = next;
    }
    acc.retain(|_, c| !c.is_zero());
    acc
}

/// `∏_l C(c_l, p_l)` where `p_l` counts the added terms in group `l`.
pub fn sign_choice_multiplicity(h: &[usize], h_prime: &[usize]) -> BigInt {
    let k = h.len() + 1;
    let counts = group_counts(h, h_prime);
    let plus = |l: usize| {
        let n = l + 1;
        if (3..k).contains(&n) {
            h[n - 2] - h_prime[n - 3]
        } else {
            h[n - 2]
        }
    };
    counts.iter().enumerate().fold(BigInt::one(), |acc, (idx, &c)| acc * binomial(c as i64, plus(idx + 1) as i64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(pairs: &[(usize, usize)]) -> DerivativeOrders {
        pairs.iter().copied().collect()
    }

    #[test]
    fn empty_orders_give_one() {
        let v = normalized_l(2, 2, &DerivativeOrders::new(), &rat(1)).unwrap();
        assert_eq!(v, ComplexRational::real(rat(1)));
    }

    #[test]
    fn single_second_power() {
        // N = 1: -4 θ_2/θ_0 = -4t/(1+t)
        let v = normalized_l(1, 1, &ord(&[(2, 1)]), &rat(1)).unwrap();
        assert_eq!(v, ComplexRational::real(rat(-2)));
        let v = normalized_l(1, 1, &ord(&[(2, 1)]), &rat(3)).unwrap();
        assert_eq!(v, ComplexRational::real(ratio(-3, 1)));
    }

    #[test]
    fn first_relation_holds() {
        for n in 1..=3 {
            for s in 1..=2 {
                assert!(first_relation_residual(n, s).unwrap().is_zero(), "N={n} s={s}");
            }
        }
    }

    #[test]
    fn second_relation_only_at_one() {
        for s in 1..=2 {
            let (re, im) = second_relation_residual(1, s).unwrap();
            assert!(re.is_zero() && im.is_zero());
        }
        let (re, im) = second_relation_residual(2, 2).unwrap();
        assert!(im.is_zero());
        assert!(!re.is_zero());
    }

    #[test]
    fn coefficient_trivial() {
        assert_eq!(expansion_coeff(&[0, 0], &[], 1, 0).unwrap(), rat(1));
        assert!(expansion_coeff(&[1, 0], &[], 1, 0).is_err());
    }

    #[test]
    fn coefficient_against_expansion() {
        for k in 3..=5 {
            for m in 0..=3 {
                for ((h, hp), c) in collected_expansion(k, m) {
                    let a = expansion_coeff(&h, &hp, m + 1, 0).unwrap();
                    let mult = sign_choice_multiplicity(&h, &hp);
                    assert_eq!(Rational::from_integer(c.clone()), &a * Rational::from_integer(mult.clone()));
                    if m <= 1 {
                        assert_eq!(Rational::from_integer(c), a);
                    }
                }
            }
        }
    }
}
