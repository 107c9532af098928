//! Symmetric polynomials in the eigenvalue coordinates.
//!
//! The `n`-th derivative of the rescaled characteristic polynomial at the
//! origin, divided by its value, is `2^{-n} Ξ_n(x)` where `x_j = cot(θ_j/2)`
//! and
//!
//! ```text
//! Ξ_n = Σ_l a_{n,l} e_l,   a_{n,l} = (-1)^{(n+l)/2} n! [z^n] sinh(z)^l cosh(z)^{N-l}.
//! ```
//!
//! The coefficient `a_{n,l}` counts compositions of `n` into `N` parts where
//! exactly the first `l` parts are odd, weighted by multinomials; the
//! exponential generating function form evaluates it in polynomial time.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::rational::{factorial, rat, Rational};
use crate::algebra::sympoly::{Exponents, MAX_ARITY};
use crate::algebra::{RationalFunction, SymPoly};
use crate::error::{Error, Result};

/// `e_k(x_1, …, x_m)`; the zero polynomial when `k > m`.
pub fn elementary(k: usize, m: usize) -> SymPoly {
    let mut p = SymPoly::zero(m);
    if k > m {
        return p;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut e: Exponents = [0; MAX_ARITY];
        for &i in &idx {
            e[i] = 1;
        }
        p.add_term(e, Rational::one());
        // next k-subset in lexicographic order
        let mut pos = k;
        loop {
            if pos == 0 {
                return p;
            }
            pos -= 1;
            if idx[pos] < m - k + pos {
                break;
            }
        }
        idx[pos] += 1;
        for q in pos + 1..k {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

/// `∏_{i<j} (x_i - x_j)^2`, expanded by successive multiplication.
pub fn vandermonde_squared(m: usize) -> SymPoly {
    let mut acc = SymPoly::one(m);
    for i in 0..m {
        for j in i + 1..m {
            let d = &SymPoly::var(i, m) - &SymPoly::var(j, m);
            acc = &acc * &(&d * &d);
        }
    }
    acc
}

/// Truncated exponential generating function product, coefficients of `z^0..z^n`.
fn series_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    let mut c = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            c[i + j] += x * y;
        }
    }
    c
}

fn series_pow(a: &[Rational], e: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); a.len()];
    acc[0] = Rational::one();
    for _ in 0..e {
        acc = series_mul(&acc, a);
    }
    acc
}

/// `a_{n,l}` for matrix size `N`.
pub fn a_coeff(n: usize, l: usize, big_n: usize) -> BigInt {
    if (n + l) % 2 == 1 || l > n || l > big_n {
        return BigInt::zero();
    }
    let inv_fact = |k: usize| Rational::new(BigInt::one(), factorial(k as u64));
    let sinh: Vec<Rational> = (0..=n).map(|k| if k % 2 == 1 { inv_fact(k) } else { Rational::zero() }).collect();
    let cosh: Vec<Rational> = (0..=n).map(|k| if k % 2 == 0 { inv_fact(k) } else { Rational::zero() }).collect();
    let prod = series_mul(&series_pow(&sinh, l), &series_pow(&cosh, big_n - l));
    let v = (&prod[n] * Rational::from_integer(factorial(n as u64))).to_integer();
    if ((n + l) / 2) % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `Ξ_n` in `N` variables together with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiPoly {
    pub n: usize,
    pub big_n: usize,
    pub poly: SymPoly,
}

pub fn xi_poly(n: usize, big_n: usize) -> XiPoly {
    let mut poly = SymPoly::zero(big_n);
    for l in 0..=n.min(big_n) {
        let a = a_coeff(n, l, big_n);
        if !a.is_zero() {
            poly = &poly + &elementary(l, big_n).scale(&Rational::from_integer(a));
        }
    }
    XiPoly { n, big_n, poly }
}

/// Ring operations needed by Newton's identities.
pub trait NewtonRing:
    Clone
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn ring_one() -> Self;
    fn ring_zero() -> Self;
    /// Multiplication by the rational `num/den`.
    fn scale_ratio(&self, num: i64, den: i64) -> Self;
}

impl NewtonRing for Rational {
    fn ring_one() -> Self {
        rat(1)
    }
    fn ring_zero() -> Self {
        rat(0)
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self * Rational::new(num.into(), den.into())
    }
}

impl NewtonRing for f64 {
    fn ring_one() -> Self {
        1.0
    }
    fn ring_zero() -> Self {
        0.0
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self * num as f64 / den as f64
    }
}

impl NewtonRing for RationalFunction {
    fn ring_one() -> Self {
        RationalFunction::one()
    }
    fn ring_zero() -> Self {
        RationalFunction::zero()
    }
    fn scale_ratio(&self, num: i64, den: i64) -> Self {
        self.scale(&Rational::new(num.into(), den.into()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NewtonDirection {
    /// Power sums `q_1..q_n` to elementary values `Y_1..Y_n`.
    PToE,
    /// Elementary values to power sums.
    EToP,
}

/// Newton's identities `n Y_n = Σ_{j=1}^n (-1)^{j-1} Y_{n-j} q_j`, `Y_0 = 1`.
/// `values[0]` holds index 1.
pub fn newton_convert<T: NewtonRing>(values: &[T], direction: NewtonDirection) -> Vec<T> {
    let n = values.len();
    match direction {
        NewtonDirection::PToE => {
            let q = values;
            let mut y: Vec<T> = vec![T::ring_one()];
            for k in 1..=n {
                let mut acc = T::ring_zero();
                for j in 1..=k {
                    let term = y[k - j].clone() * &q[j - 1];
                    acc = if j % 2 == 1 { acc + &term } else { acc - &term };
                }
                y.push(acc.scale_ratio(1, k as i64));
            }
            y.split_off(1)
        }
        NewtonDirection::EToP => {
            let mut y: Vec<T> = vec![T::ring_one()];
            y.extend(values.iter().cloned());
            let mut q: Vec<T> = Vec::with_capacity(n);
            for k in 1..=n {
                let mut acc = y[k].scale_ratio(k as i64, 1);
                for j in 1..k {
                    let term = y[k - j].clone() * &q[j - 1];
                    acc = if j % 2 == 1 { acc - &term } else { acc + &term };
                }
                q.push(if k % 2 == 1 { acc } else { T::ring_zero() - &acc });
            }
            q
        }
    }
}

fn check_even(exponents: &[u32]) -> Result<()> {
    if let Some(e) = exponents.iter().find(|&&e| e % 2 == 1) {
        return Err(Error::UnsupportedOddExponent(e.to_string()));
    }
    Ok(())
}

/// `∏_j Ξ_{n_j}^{2h_j}` in `N` variables.
pub fn z_variant_integrand(orders: &[usize], exponents: &[u32], big_n: usize) -> Result<SymPoly> {
    check_even(exponents)?;
    let mut acc = SymPoly::one(big_n);
    for (&n, &e) in orders.iter().zip(exponents) {
        acc = &acc * &xi_poly(n, big_n).poly.pow(e);
    }
    Ok(acc)
}

/// Real and imaginary parts of `Σ_m C(n,m) (-iN)^m Ξ_{n-m}`.
pub fn v_derivative_parts(n: usize, big_n: usize) -> (SymPoly, SymPoly) {
    let mut re = SymPoly::zero(big_n);
    let mut im = SymPoly::zero(big_n);
    let nn = BigInt::from(big_n);
    for m in 0..=n {
        let c = crate::algebra::rational::binomial(n as i64, m as i64) * num_traits::pow(nn.clone(), m);
        // (-i)^m cycles through 1, -i, -1, i
        let (target, sign) = match m % 4 {
            0 => (&mut re, 1),
            1 => (&mut im, -1),
            2 => (&mut re, -1),
            _ => (&mut im, 1),
        };
        let term = xi_poly(n - m, big_n).poly.scale(&Rational::from_integer(c * sign));
        *target = &*target + &term;
    }
    (re, im)
}

/// `∏_j |Σ_m C(n_j,m)(-iN)^m Ξ_{n_j-m}|^{2h_j}` as a real polynomial.
///
/// This is `|V^{(n)}(0)|/|V(0)|` up to the factor `2^{-n}` per derivative.
pub fn v_variant_integrand(orders: &[usize], exponents: &[u32], big_n: usize) -> Result<SymPoly> {
    check_even(exponents)?;
    let mut acc = SymPoly::one(big_n);
    for (&n, &e) in orders.iter().zip(exponents) {
        let (re, im) = v_derivative_parts(n, big_n);
        let modulus_sq = &(&re * &re) + &(&im * &im);
        acc = &acc * &modulus_sq.pow(e / 2);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    #[test]
    fn elementary_basics() {
        assert_eq!(elementary(0, 3), SymPoly::one(3));
        assert_eq!(elementary(2, 3).len(), 3);
        assert!(elementary(4, 3).is_zero());
        let ones = vec![rat(1); 5];
        assert_eq!(elementary(2, 5).eval(&ones), rat(10));
    }

    #[test]
    fn vandermonde_small() {
        assert_eq!(vandermonde_squared(1), SymPoly::one(1));
        assert_eq!(vandermonde_squared(2), SymPoly::parse("x1^2 - 2*x1*x2 + x2^2", 2).unwrap());
        let pts: Vec<_> = (0..3).map(rat).collect();
        assert_eq!(vandermonde_squared(3).eval(&pts), rat(4));
    }

    #[test]
    fn a_coeff_examples() {
        for n in 1..6 {
            assert_eq!(a_coeff(2, 2, n.max(2)), BigInt::from(2));
            assert_eq!(a_coeff(2, 0, n), BigInt::from(-(n as i64)));
            assert_eq!(a_coeff(3, 1, n), BigInt::from(3 * n as i64 - 2));
        }
    }

    #[test]
    fn xi_examples() {
        assert_eq!(xi_poly(0, 3).poly, SymPoly::one(3));
        assert_eq!(xi_poly(1, 3).poly, elementary(1, 3).scale(&rat(-1)));
        assert_eq!(xi_poly(2, 1).poly, SymPoly::constant(1, rat(-1)));
    }

    #[test]
    fn newton_examples() {
        let q = vec![rat(6), rat(14), rat(36)];
        let y = newton_convert(&q, NewtonDirection::PToE);
        assert_eq!(y, vec![rat(6), rat(11), rat(6)]);
        assert_eq!(newton_convert(&y, NewtonDirection::EToP), q);
        let (q1, q2) = (ratio(3, 2), ratio(-2, 5));
        let y = newton_convert(&[q1.clone(), q2.clone()], NewtonDirection::PToE);
        assert_eq!(y[1], (&q1 * &q1 - q2) / rat(2));
    }

    #[test]
    fn v_variant_examples() {
        assert_eq!(v_variant_integrand(&[0], &[2], 3).unwrap(), SymPoly::one(3));
        let want = &elementary(1, 2).pow(2) + &SymPoly::constant(2, rat(4));
        assert_eq!(v_variant_integrand(&[1], &[2], 2).unwrap(), want);
        assert!(matches!(v_variant_integrand(&[1], &[3], 2), Err(Error::UnsupportedOddExponent(_))));
        let p = v_variant_integrand(&[2, 1], &[2, 2], 2).unwrap();
        assert_eq!(p.reflect(), p);
    }
}
