//! Truncated power series with exact rational coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{rat, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 24;

/// `c_0 + c_1 t + ... + c_K t^K + O(t^{K+1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
}

impl PowerSeries {
    /// Pads or truncates `coeffs` to order `k`.
    pub fn new(mut coeffs: Vec<Rational>, k: usize) -> Self {
        coeffs.resize(k + 1, Rational::zero());
        PowerSeries { coeffs }
    }

    pub fn zero(k: usize) -> Self {
        PowerSeries::new(Vec::new(), k)
    }

    pub fn one(k: usize) -> Self {
        PowerSeries::new(vec![Rational::one()], k)
    }

    /// The series of `t`.
    pub fn t(k: usize) -> Self {
        PowerSeries::new(vec![Rational::zero(), Rational::one()], k)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn truncate(&self, k: usize) -> Self {
        PowerSeries::new(self.coeffs.clone(), k.min(self.order()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// `f(c·t)`.
    pub fn rescale_arg(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        PowerSeries { coeffs: out }
    }

    /// Formal derivative; the result has order `K - 1`.
    pub fn derivative(&self) -> Self {
        let k = self.order();
        let c = (1..=k).map(|n| &self.coeffs[n] * rat(n as i64)).collect();
        PowerSeries::new(c, k.saturating_sub(1))
    }

    /// `t·f'(t)`, exact to the same order.
    pub fn euler(&self) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().enumerate().map(|(n, c)| c * rat(n as i64)).collect() }
    }

    /// Multiplication by `t^n`, keeping the order.
    pub fn shift(&self, n: usize) -> Self {
        let mut c = vec![Rational::zero(); n];
        c.extend(self.coeffs.iter().cloned());
        PowerSeries::new(c, self.order())
    }

    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let inv0 = c0.recip();
        let k = self.order();
        let mut g = vec![Rational::zero(); k + 1];
        g[0] = inv0.clone();
        for n in 1..=k {
            let mut acc = Rational::zero();
            for j in 1..=n {
                acc += &self.coeffs[j] * &g[n - j];
            }
            g[n] = -acc * &inv0;
        }
        Ok(PowerSeries { coeffs: g })
    }

    pub fn checked_div(&self, d: &Self) -> Result<Self> {
        Ok(self * &d.inverse()?)
    }

    /// `log f` for `f(0) = 1`.
    pub fn log(&self) -> Result<Self> {
        if self.coeffs[0].is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        if !self.coeffs[0].is_one() {
            return Err(Error::Unsupported("log of a series needs constant term 1".into()));
        }
        let k = self.order();
        let mut h = vec![Rational::zero(); k + 1];
        for n in 1..=k {
            let mut acc = &self.coeffs[n] * rat(n as i64);
            for (j, hj) in h.iter().enumerate().take(n).skip(1) {
                acc -= hj * rat(j as i64) * &self.coeffs[n - j];
            }
            h[n] = acc / rat(n as i64);
        }
        Ok(PowerSeries { coeffs: h })
    }

    /// `exp g` for `g(0) = 0`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::Unsupported("exp of a series needs constant term 0".into()));
        }
        let k = self.order();
        let mut g = vec![Rational::zero(); k + 1];
        g[0] = Rational::one();
        for n in 1..=k {
            let mut acc = Rational::zero();
            for j in 1..=n {
                acc += rat(j as i64) * &self.coeffs[j] * &g[n - j];
            }
            g[n] = acc / rat(n as i64);
        }
        Ok(PowerSeries { coeffs: g })
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + super::rational::to_f64(c))
    }

    /// Index of the first nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

/// `t·f'(t)/f(t)`, the logarithmic derivative used for tau functions.
pub fn series_logderiv(f: &PowerSeries) -> Result<PowerSeries> {
    f.euler().checked_div(f)
}

fn zip_with(a: &PowerSeries, b: &PowerSeries, op: impl Fn(&Rational, &Rational) -> Rational) -> PowerSeries {
    let k = a.order().min(b.order());
    PowerSeries { coeffs: (0..=k).map(|n| op(&a.coeffs[n], &b.coeffs[n])).collect() }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, o: &PowerSeries) -> PowerSeries {
        zip_with(self, o, |a, b| a + b)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, o: &PowerSeries) -> PowerSeries {
        zip_with(self, o, |a, b| a - b)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;
    fn neg(self) -> PowerSeries {
        self.scale(&rat(-1))
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, o: &PowerSeries) -> PowerSeries {
        let k = self.order().min(o.order());
        let mut c = vec![Rational::zero(); k + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(k + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(k + 1 - i) {
                c[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: c }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PowerSeries {
            type Output = PowerSeries;
            fn $m(self, o: PowerSeries) -> PowerSeries {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    #[test]
    fn logderiv_geometric() {
        let f = PowerSeries::new(vec![rat(1), rat(1)], 6);
        let g = series_logderiv(&f).unwrap();
        let want: Vec<_> =
            (0..=6).map(|n| if n == 0 { rat(0) } else { rat(if n % 2 == 1 { 1 } else { -1 }) }).collect();
        assert_eq!(g.coeffs(), &want[..]);
    }

    #[test]
    fn logderiv_constant() {
        let g = series_logderiv(&PowerSeries::one(5)).unwrap();
        assert_eq!(g, PowerSeries::zero(5));
    }

    #[test]
    fn logderiv_quadratic() {
        let f = PowerSeries::new(vec![rat(1), rat(0), ratio(-1, 6)], 4);
        let g = series_logderiv(&f).unwrap();
        assert_eq!(g.coeff(2), ratio(-1, 3));
        assert_eq!(g.coeff(4), ratio(-1, 18));
        assert_eq!(g.coeff(3), rat(0));
    }

    #[test]
    fn zero_constant_term() {
        let f = PowerSeries::t(4);
        assert_eq!(series_logderiv(&f), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn exp_of_log() {
        let f = PowerSeries::new(vec![rat(1), ratio(2, 3), rat(-5)], 10);
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
    }
}
