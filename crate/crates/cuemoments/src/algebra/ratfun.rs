//! Rational functions of one variable in canonical form.
//!
//! Numerator and denominator are coprime and the denominator is monic, so two
//! equal values always have identical representations and `==` is value
//! equality.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::Poly;
use super::rational::{parse_rational, to_pq, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Builds `num/den` in canonical form.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = (num.exact_div(&g), den.exact_div(&g));
        let lead = den.lead().recip();
        Ok(RationalFunction { num: num.scale(&lead), den: den.scale(&lead) })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_int(c: i64) -> Self {
        Self::from_poly(Poly::from_ints(&[c]))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    /// The indeterminate.
    pub fn var() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Self::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::PoleAtEvaluationPoint(to_pq(x)));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    /// `f(c·x)`.
    pub fn rescale_arg(&self, c: &Rational) -> Self {
        Self::new(self.num.rescale_arg(c), self.den.rescale_arg(c)).expect("c is nonzero")
    }

    /// Integer-coefficient form used for serialization: both polynomials
    /// scaled by one rational so that all coefficients are coprime integers
    /// and the denominator's leading coefficient is positive.
    pub fn primitive_integer_form(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut l = BigInt::one();
        for c in self.num.coeffs().iter().chain(self.den.coeffs()) {
            l = l.lcm(c.denom());
        }
        let lr = Rational::from_integer(l);
        let scaled = |p: &Poly| -> Vec<BigInt> { p.coeffs().iter().map(|c| (c * &lr).to_integer()).collect() };
        let (mut n, mut d) = (scaled(&self.num), scaled(&self.den));
        let mut g = BigInt::zero();
        for c in n.iter().chain(d.iter()) {
            g = g.gcd(c);
        }
        if !g.is_zero() && !g.is_one() {
            n.iter_mut().for_each(|c| *c /= &g);
            d.iter_mut().for_each(|c| *c /= &g);
        }
        if d.last().is_some_and(|c| c.is_negative()) {
            n.iter_mut().for_each(|c| *c = -c.clone());
            d.iter_mut().for_each(|c| *c = -c.clone());
        }
        (n, d)
    }

    pub fn display_in(&self, var: &str) -> String {
        let (n, d) = self.primitive_integer_form();
        let pn = Poly::new(n.into_iter().map(Rational::from_integer).collect());
        let pd = Poly::new(d.into_iter().map(Rational::from_integer).collect());
        let wrap = |p: &Poly| {
            let s = p.display_in(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
                format!("({s})")
            } else {
                s
            }
        };
        if pd.degree() == Some(0) && pd.coeff(0).is_one() {
            pn.display_in(var)
        } else {
            format!("{}/{}", wrap(&pn), wrap(&pd))
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("s"))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        if self.den == o.den {
            return RationalFunction::new(&self.num + &o.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        self + &(-o)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; see [`RationalFunction::checked_div`].
    fn div(self, o: &RationalFunction) -> RationalFunction {
        self.checked_div(o).expect("division by the zero function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, o: RationalFunction) -> RationalFunction {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<'a> Add<&'a RationalFunction> for RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &'a RationalFunction) -> RationalFunction {
        &self + o
    }
}

impl<'a> Sub<&'a RationalFunction> for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &'a RationalFunction) -> RationalFunction {
        &self - o
    }
}

impl<'a> Mul<&'a RationalFunction> for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &'a RationalFunction) -> RationalFunction {
        &self * o
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl std::iter::Sum for RationalFunction {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(RationalFunction::zero(), |a, b| &a + &b)
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    num: Vec<String>,
    den: Vec<String>,
}

impl Serialize for RationalFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (n, d) = self.primitive_integer_form();
        Wire { num: n.iter().map(|c| c.to_string()).collect(), den: d.iter().map(|c| c.to_string()).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        let parse = |v: &[String]| -> std::result::Result<Poly, D::Error> {
            v.iter()
                .map(|c| parse_rational(c))
                .collect::<Result<Vec<_>>>()
                .map(Poly::new)
                .map_err(serde::de::Error::custom)
        };
        RationalFunction::new(parse(&w.num)?, parse(&w.den)?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn lin(a: i64, b: i64) -> Poly {
        Poly::from_ints(&[b, a])
    }

    #[test]
    fn inverse_pair() {
        let f = RationalFunction::new(Poly::one(), lin(2, -1)).unwrap();
        let g = RationalFunction::from_poly(lin(2, -1));
        assert_eq!(&f * &g, RationalFunction::one());
    }

    #[test]
    fn common_denominator() {
        let a = RationalFunction::new(Poly::one(), lin(2, -1)).unwrap();
        let b = RationalFunction::new(Poly::one(), lin(2, 1)).unwrap();
        let want = RationalFunction::new(lin(4, 0), Poly::from_ints(&[-1, 0, 4])).unwrap();
        assert_eq!(&a + &b, want);
    }

    #[test]
    fn gcd_reduction() {
        let f = RationalFunction::new(Poly::from_ints(&[-1, 0, 1]), lin(1, -1)).unwrap();
        assert_eq!(f, RationalFunction::from_poly(lin(1, 1)));
    }

    #[test]
    fn evaluation() {
        let f = RationalFunction::new(Poly::one(), Poly::from_ints(&[-1, 0, 4])).unwrap();
        assert_eq!(f.eval(&rat(1)).unwrap(), ratio(1, 3));
        assert!(matches!(f.eval(&ratio(1, 2)), Err(Error::PoleAtEvaluationPoint(_))));
        let g = RationalFunction::new(lin(2, -1), lin(2, 3)).unwrap();
        assert_eq!(g.eval(&rat(2)).unwrap(), ratio(3, 7));
    }

    #[test]
    fn zero_division() {
        let f = RationalFunction::one();
        assert_eq!(f.checked_div(&RationalFunction::zero()), Err(Error::DivisionByZeroFunction));
        assert_eq!(RationalFunction::new(Poly::one(), Poly::zero()), Err(Error::DivisionByZeroFunction));
    }

    #[test]
    fn json_roundtrip() {
        let f = RationalFunction::new(Poly::one(), Poly::from_ints(&[-1, 0, 4])).unwrap();
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"num":["1"],"den":["-1","0","4"]}"#);
        let g: RationalFunction = serde_json::from_str(&j).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.to_string(), "1/(4*s^2 - 1)");
    }

    #[test]
    fn derivative_quotient_rule() {
        let f = RationalFunction::new(Poly::one(), lin(1, 0)).unwrap();
        let want = RationalFunction::new(Poly::from_ints(&[-1]), Poly::from_ints(&[0, 0, 1])).unwrap();
        assert_eq!(f.derivative(), want);
    }
}
