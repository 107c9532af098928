//! Functions of the form `e^{-ct}·p(t)`.

use std::fmt;

use super::poly::Poly;
use super::rational::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyFunction {
    pub decay: u32,
    pub poly: Poly,
}

impl ExpPolyFunction {
    pub fn new(decay: u32, poly: Poly) -> Self {
        ExpPolyFunction { decay, poly }
    }

    pub fn zero(decay: u32) -> Self {
        ExpPolyFunction::new(decay, Poly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// Sum; both terms must share the decay rate unless one is zero.
    pub fn add(&self, o: &Self) -> Self {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        assert_eq!(self.decay, o.decay, "sum of exp-poly functions with different decay");
        ExpPolyFunction::new(self.decay, &self.poly + &o.poly)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rat(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        ExpPolyFunction::new(self.decay + o.decay, &self.poly * &o.poly)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ExpPolyFunction::new(self.decay, self.poly.scale(c))
    }

    /// Multiplication by a polynomial in `t`.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        ExpPolyFunction::new(self.decay, &self.poly * p)
    }

    /// `d/dt [e^{-ct} p] = e^{-ct} (p' - c p)`.
    pub fn derivative(&self) -> Self {
        let c = rat(self.decay as i64);
        ExpPolyFunction::new(self.decay, &self.poly.derivative() - &self.poly.scale(&c))
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |f, _| f.derivative())
    }

    /// The polynomial factor at `t0`; the full value is `e^{-c t0}` times this.
    pub fn poly_at(&self, t0: &Rational) -> Rational {
        self.poly.eval(t0)
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        (-(self.decay as f64) * t).exp() * self.poly.eval_f64(t)
    }
}

impl fmt::Display for ExpPolyFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp(-{}t)*({})", self.decay, self.poly.display_in("t"))
    }
}
