//! Sparse multivariate polynomials over the rationals with at most
//! [`MAX_ARITY`] variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rational::{parse_rational, rat, Rational};
use crate::error::{Error, Result};

pub const MAX_ARITY: usize = 8;

/// Dense exponent vector; entries past the arity are zero.
pub type Exponents = [u8; MAX_ARITY];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    arity: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl SymPoly {
    pub fn zero(arity: usize) -> Self {
        assert!(arity <= MAX_ARITY, "arity {arity} exceeds {MAX_ARITY}");
        SymPoly { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: Rational) -> Self {
        let mut p = SymPoly::zero(arity);
        p.add_term([0; MAX_ARITY], c);
        p
    }

    pub fn one(arity: usize) -> Self {
        SymPoly::constant(arity, Rational::one())
    }

    /// The variable `x_{i+1}` (zero-based index `i`).
    pub fn var(i: usize, arity: usize) -> Self {
        assert!(i < arity);
        let mut e = [0; MAX_ARITY];
        e[i] = 1;
        let mut p = SymPoly::zero(arity);
        p.add_term(e, Rational::one());
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Exponents, Rational)>) -> Self {
        let mut p = SymPoly::zero(arity);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Rational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exponents, c: Rational) {
        debug_assert!(e[self.arity..].iter().all(|&x| x == 0));
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&x| x as usize).sum()).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_var_degree(&self) -> usize {
        self.terms.keys().flat_map(|e| e.iter().copied()).max().unwrap_or(0) as usize
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SymPoly::from_terms(self.arity, self.terms.iter().map(|(e, v)| (*e, v * c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = SymPoly::one(self.arity);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        assert_eq!(x.len(), self.arity);
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e.iter()) {
                t *= num_traits::pow(xi.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        self.compile().eval(x)
    }

    /// Floating-point copy for repeated evaluation.
    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (*e, super::rational::to_f64(c))).collect(),
        }
    }

    /// `P(x)` with the variables permuted by swapping `i` and `j`.
    pub fn swap_vars(&self, i: usize, j: usize) -> Self {
        SymPoly::from_terms(
            self.arity,
            self.terms.iter().map(|(e, c)| {
                let mut f = *e;
                f.swap(i, j);
                (f, c.clone())
            }),
        )
    }

    /// `P(-x)`.
    pub fn reflect(&self) -> Self {
        SymPoly::from_terms(
            self.arity,
            self.terms.iter().map(|(e, c)| {
                let deg: u32 = e.iter().map(|&x| x as u32).sum();
                (*e, if deg % 2 == 1 { -c } else { c.clone() })
            }),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.arity.saturating_sub(1)).all(|i| self.swap_vars(i, i + 1) == *self)
    }

    /// Parses sums of products such as `x1^2 - 3/2*x1*x2 + 4`.
    pub fn parse(text: &str, arity: usize) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::ArityBoundExceeded { arity, max: MAX_ARITY });
        }
        let bad = |m: &str| Error::Parse(format!("{m} in polynomial {text:?}"));
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty input"));
        }
        let mut out = SymPoly::zero(arity);
        let mut chunks = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 && !cur.ends_with('^') {
                chunks.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        chunks.push(cur);
        for chunk in chunks {
            let (neg, body) = match chunk.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, chunk.strip_prefix('+').unwrap_or(&chunk)),
            };
            let mut coeff = Rational::one();
            let mut e = [0u8; MAX_ARITY];
            for factor in body.split('*') {
                if let Some(rest) = factor.strip_prefix('x') {
                    let (idx, pow) = match rest.split_once('^') {
                        Some((i, p)) => (i, p.parse::<u8>().map_err(|_| bad("bad exponent"))?),
                        None => (rest, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad("bad variable index"))?;
                    if idx == 0 || idx > arity {
                        return Err(bad("variable index out of range"));
                    }
                    e[idx - 1] = e[idx - 1].checked_add(pow).ok_or_else(|| bad("exponent overflow"))?;
                } else {
                    coeff *= parse_rational(factor).map_err(|_| bad("bad coefficient"))?;
                }
            }
            out.add_term(e, if neg { -coeff } else { coeff });
        }
        Ok(out)
    }
}

/// Floating-point evaluator for a [`SymPoly`].
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    arity: usize,
    terms: Vec<(Exponents, f64)>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.arity);
        self.terms.iter().map(|(e, c)| x.iter().zip(e.iter()).fold(*c, |t, (xi, &k)| t * xi.powi(k as i32))).sum()
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = e[..self.arity]
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &SymPoly {
    type Output = SymPoly;
    fn add(self, o: &SymPoly) -> SymPoly {
        assert_eq!(self.arity, o.arity, "arity mismatch");
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &SymPoly {
    type Output = SymPoly;
    fn sub(self, o: &SymPoly) -> SymPoly {
        self + &(-o)
    }
}

impl Neg for &SymPoly {
    type Output = SymPoly;
    fn neg(self) -> SymPoly {
        self.scale(&rat(-1))
    }
}

impl Mul for &SymPoly {
    type Output = SymPoly;
    fn mul(self, o: &SymPoly) -> SymPoly {
        assert_eq!(self.arity, o.arity, "arity mismatch");
        let mut acc: HashMap<Exponents, Rational> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb.iter()) {
                    *x = x.checked_add(*y).expect("exponent overflow");
                }
                *acc.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        SymPoly::from_terms(self.arity, acc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for SymPoly {
            type Output = SymPoly;
            fn $m(self, o: SymPoly) -> SymPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
