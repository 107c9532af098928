//! Exact expectations over the Cauchy (Hua–Pickrell) eigenvalue measure
//!
//! ```text
//! M_m^{(s)}(dx) ∝ ∏_{i<j} (x_i - x_j)^2 ∏_i (1 + x_i^2)^{-s-m} dx
//! ```
//!
//! as rational functions of `s`. Polynomial integrands factorize into
//! one-dimensional Student-t moments once multiplied by the squared
//! Vandermonde, so every expectation here is assembled from
//! [`weight_moment`] values without evaluating any Gamma function.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{factorial, rat, Rational};
use crate::algebra::sympoly::{Exponents, MAX_ARITY};
use crate::algebra::{Poly, RationalFunction, SymPoly};
use crate::error::{Error, Result};
use crate::symmetric::{self, elementary};
use crate::Execution;

/// Largest arity handled by the exact engine.
pub const MAX_EXACT_ARITY: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// Derivatives of the characteristic polynomial itself.
    V,
    /// Derivatives of its real rescaling on the unit circle.
    Z,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Size {
    Finite(usize),
    Limit,
}

/// A joint-moment query: derivative orders `n_1 > … > n_k ≥ 0` and the
/// exponents `2h_j` applied to each derivative's modulus.
///
/// Exponents attached to order `0` are carried by `s` and are not read by
/// the exact engine.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub orders: Vec<usize>,
    pub exponents: Vec<f64>,
    pub variant: Variant,
    pub size: Size,
}

impl MomentSpec {
    pub fn new(orders: Vec<usize>, exponents: Vec<f64>, variant: Variant, size: Size) -> Result<Self> {
        let spec = MomentSpec { orders, exponents, variant, size };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.orders.is_empty() || self.orders.len() != self.exponents.len() {
            return Err(Error::InvalidSpec("orders and exponents must be non-empty lists of equal length".into()));
        }
        if self.orders.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidSpec("orders must be strictly decreasing".into()));
        }
        for (&n, &e) in self.orders.iter().zip(&self.exponents) {
            if n > 0 && !(e > 0.0 && e.is_finite()) {
                return Err(Error::InvalidSpec(format!("exponent {e} must be positive")));
            }
        }
        if let Size::Finite(0) = self.size {
            return Err(Error::InvalidSpec("matrix size must be at least 1".into()));
        }
        Ok(())
    }

    /// Pairs `(n_j, 2h_j)` with `n_j > 0`, exponents as even integers.
    pub fn even_pairs(&self) -> Result<Vec<(usize, u32)>> {
        let mut out = Vec::new();
        for (&n, &e) in self.orders.iter().zip(&self.exponents) {
            if n == 0 {
                continue;
            }
            if e.fract() != 0.0 || (e as u64) % 2 == 1 {
                return Err(Error::UnsupportedOddExponent(e.to_string()));
            }
            out.push((n, e as u32));
        }
        Ok(out)
    }

    /// `Σ 2h_j n_j` over the positive orders.
    pub fn derivative_weight(&self) -> f64 {
        self.orders.iter().zip(&self.exponents).filter(|(n, _)| **n > 0).map(|(&n, &e)| n as f64 * e).sum()
    }
}

fn lin2s(c: i64) -> Poly {
    Poly::from_ints(&[c, 2])
}

/// `∫x^r (1+x^2)^{-(s+m)} dx / ∫(1+x^2)^{-(s+m)} dx`.
///
/// Formally `∏_{j=1}^{r/2} (2j-1)/(2s+2m-1-2j)` for even `r` and `0` for odd `r`;
/// the integral converges for `2(s+m) > r+1`.
pub fn weight_moment(r: usize, m: usize) -> RationalFunction {
    if r % 2 == 1 {
        return RationalFunction::zero();
    }
    let mut acc = RationalFunction::one();
    for j in 1..=(r / 2) as i64 {
        let f = RationalFunction::new(Poly::from_ints(&[2 * j - 1]), lin2s(2 * m as i64 - 1 - 2 * j)).unwrap();
        acc = &acc * &f;
    }
    acc
}

/// Table `μ_0..μ_{r_max}` of [`weight_moment`] values for one arity.
#[derive(Clone, Debug)]
pub struct WeightMoments {
    pub m: usize,
    pub table: Vec<RationalFunction>,
}

impl WeightMoments {
    pub fn new(m: usize, r_max: usize) -> Self {
        WeightMoments { m, table: (0..=r_max).map(|r| weight_moment(r, m)).collect() }
    }

    /// All entries are genuine integrals for `s` above this value.
    pub fn valid_above(&self) -> Rational {
        Rational::new(BigInt::from(self.table.len() as i64), BigInt::from(2)) - rat(self.m as i64)
    }
}

fn vandermonde_cached(m: usize) -> &'static SymPoly {
    static CACHE: [OnceLock<SymPoly>; MAX_EXACT_ARITY + 1] = [const { OnceLock::new() }; MAX_EXACT_ARITY + 1];
    CACHE[m].get_or_init(|| symmetric::vandermonde_squared(m))
}

/// Integer coefficients of `c·P` for the least positive integer `c`.
fn integer_terms(p: &SymPoly) -> (Vec<(Exponents, BigInt)>, BigInt) {
    let mut l = BigInt::one();
    for c in p.terms().values() {
        l = l.lcm(c.denom());
    }
    let lr = Rational::from_integer(l.clone());
    let terms = p.terms().iter().map(|(e, c)| (*e, (c * &lr).to_integer())).collect();
    (terms, l)
}

type Moments = HashMap<Exponents, BigInt>;

/// Collects `P·Δ²` by sorted even exponent vector; terms with an odd
/// exponent integrate to zero and are dropped.
fn collect_against_vandermonde(p: &[(Exponents, BigInt)], m: usize, exec: Execution) -> Moments {
    let d: Vec<(Exponents, BigInt)> = vandermonde_cached(m).terms().iter().map(|(e, c)| (*e, c.to_integer())).collect();
    let fold_one = |mut acc: Moments, (ea, ca): &(Exponents, BigInt)| {
        for (eb, cb) in &d {
            let mut e = *ea;
            let mut odd = false;
            for (x, y) in e.iter_mut().zip(eb.iter()) {
                *x += *y;
                odd |= *x % 2 == 1;
            }
            if odd {
                continue;
            }
            e[..m].sort_unstable_by(|a, b| b.cmp(a));
            *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
        acc
    };
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        let merge = |mut a: Moments, b: Moments| {
            for (k, v) in b {
                *a.entry(k).or_insert_with(BigInt::zero) += v;
            }
            a
        };
        return p.par_iter().fold(Moments::new, fold_one).reduce(Moments::new, merge);
    }
    let _ = exec;
    p.iter().fold(Moments::new(), fold_one)
}

/// `Σ_key C_key ∏_i μ_{key_i}` as a single rational function, using the
/// common denominator `∏_j (2s+2m-1-2j)^{max multiplicity}`.
fn integrate_collected(moments: &Moments, m: usize) -> RationalFunction {
    let half = |e: &Exponents| -> Vec<usize> { e[..m].iter().map(|&x| x as usize / 2).collect() };
    let pmax = moments.keys().map(|e| half(e).into_iter().max().unwrap_or(0)).max().unwrap_or(0);
    let mult = |ps: &[usize], j: usize| ps.iter().filter(|&&p| p >= j).count();
    let mut lcm_mult = vec![0usize; pmax + 1];
    for e in moments.keys() {
        let ps = half(e);
        for (j, slot) in lcm_mult.iter_mut().enumerate().skip(1) {
            *slot = (*slot).max(mult(&ps, j));
        }
    }
    let factor = |j: usize| lin2s(2 * m as i64 - 1 - 2 * j as i64);
    let mut powers: Vec<Vec<Poly>> = Vec::with_capacity(pmax + 1);
    for (j, &mult) in lcm_mult.iter().enumerate().take(pmax + 1) {
        let mut row = vec![Poly::one()];
        for k in 1..=mult {
            row.push(&row[k - 1] * &factor(j));
        }
        powers.push(row);
    }
    let odd_double_factorial = |p: usize| -> BigInt { (1..=p).fold(BigInt::one(), |a, j| a * BigInt::from(2 * j - 1)) };
    let mut num = Poly::zero();
    let mut keys: Vec<&Exponents> = moments.keys().collect();
    keys.sort();
    for e in keys {
        let c = &moments[e];
        if c.is_zero() {
            continue;
        }
        let ps = half(e);
        let mut coeff = c.clone();
        for &p in &ps {
            coeff *= odd_double_factorial(p);
        }
        let mut term = Poly::constant(Rational::from_integer(coeff));
        for j in 1..=pmax {
            term = &term * &powers[j][lcm_mult[j] - mult(&ps, j)];
        }
        num = &num + &term;
    }
    let mut den = Poly::one();
    for j in 1..=pmax {
        den = &den * &powers[j][lcm_mult[j]];
    }
    RationalFunction::new(num, den).expect("nonzero denominator")
}

fn check_arity(m: usize) -> Result<()> {
    if m > MAX_EXACT_ARITY {
        return Err(Error::ArityBoundExceeded { arity: m, max: MAX_EXACT_ARITY });
    }
    Ok(())
}

/// `E_m^{(s)}[P] = ⟨P Δ²⟩ / ⟨Δ²⟩`.
pub fn hp_expectation(p: &SymPoly, m: usize) -> Result<RationalFunction> {
    hp_expectation_with(p, m, Execution::default())
}

pub fn hp_expectation_with(p: &SymPoly, m: usize, exec: Execution) -> Result<RationalFunction> {
    check_arity(m)?;
    if p.arity() != m {
        return Err(Error::InvalidSpec(format!("polynomial arity {} differs from m = {m}", p.arity())));
    }
    if p.is_zero() {
        return Ok(RationalFunction::zero());
    }
    let (terms, scale) = integer_terms(p);
    let top = integrate_collected(&collect_against_vandermonde(&terms, m, exec), m);
    let one = vec![([0u8; MAX_ARITY], BigInt::one())];
    let bottom = integrate_collected(&collect_against_vandermonde(&one, m, exec), m);
    Ok((&top / &bottom).scale(&Rational::new(BigInt::one(), scale)))
}

/// Smallest `s` beyond which `E_m^{(s)}[P]` is a convergent integral.
pub fn integrability_threshold(p: &SymPoly, m: usize) -> Rational {
    let r = p.max_var_degree() + 2 * m.saturating_sub(1);
    Rational::new(BigInt::from(r as i64 + 1), BigInt::from(2)) - rat(m as i64)
}

/// `E[∏_j Y_{n_j}^{r_j}]` for the limiting variables, by the finite
/// alternating sum over Cauchy expectations of size `n_1..L`, `L = Σ r_j n_j`.
pub fn limiting_monomial(pairs: &[(usize, u32)]) -> Result<RationalFunction> {
    let pairs: Vec<(usize, u32)> = pairs.iter().copied().filter(|&(n, r)| n > 0 && r > 0).collect();
    let l: usize = pairs.iter().map(|&(n, r)| n * r as usize).sum();
    if l == 0 {
        return Ok(RationalFunction::one());
    }
    check_arity(l)?;
    let n1 = pairs.iter().map(|p| p.0).max().unwrap();
    let mut pref = Rational::new(BigInt::one(), factorial(l as u64));
    for &(n, r) in &pairs {
        pref *= Rational::from_integer(num_traits::pow(factorial(n as u64), r as usize));
    }
    let mut total = RationalFunction::zero();
    for m in n1..=l {
        let mut integrand = SymPoly::one(m);
        for &(n, r) in &pairs {
            integrand = &integrand * &elementary(n, m).pow(r);
        }
        let c = crate::algebra::rational::binomial(l as i64, m as i64);
        let sign = if (m + l) % 2 == 1 { -c } else { c };
        total = &total + &hp_expectation(&integrand, m)?.scale(&Rational::from_integer(sign));
    }
    Ok(total.scale(&pref))
}

/// `E[∏ Y_{n_j}^{2h_j}]` for even exponents.
pub fn limiting_moment(orders: &[usize], exponents: &[u32]) -> Result<RationalFunction> {
    if let Some(e) = exponents.iter().find(|&&e| e % 2 == 1) {
        return Err(Error::UnsupportedOddExponent(e.to_string()));
    }
    let pairs: Vec<(usize, u32)> = orders.iter().copied().zip(exponents.iter().copied()).collect();
    limiting_monomial(&pairs)
}

/// Limit of `N^{-Σ2h_j n_j}·E_N[integrand]` for the V-variant, where each
/// factor becomes `|Σ_m C(n,m)(-i)^m (-1)^{n-m} Y_{n-m}|^{2h}`.
pub fn limiting_v_moment(orders: &[usize], exponents: &[u32]) -> Result<RationalFunction> {
    if let Some(e) = exponents.iter().find(|&&e| e % 2 == 1) {
        return Err(Error::UnsupportedOddExponent(e.to_string()));
    }
    // polynomial in Y_1..Y_L as map from exponent vector to rational coefficient
    type YPoly = HashMap<Vec<u32>, Rational>;
    let width = orders.iter().copied().max().unwrap_or(0) + 1;
    let mul = |a: &YPoly, b: &YPoly| -> YPoly {
        let mut out = YPoly::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    let unit = || -> YPoly { [(vec![0u32; width], Rational::one())].into_iter().collect() };
    let mut acc = unit();
    for (&n, &e) in orders.iter().zip(exponents) {
        if n == 0 {
            continue;
        }
        let mut re = YPoly::new();
        let mut im = YPoly::new();
        for m in 0..=n {
            let k = n - m;
            let mut c = Rational::from_integer(crate::algebra::rational::binomial(n as i64, m as i64));
            if k % 2 == 1 {
                c = -c;
            }
            let (target, sign) = match m % 4 {
                0 => (&mut re, 1),
                1 => (&mut im, -1),
                2 => (&mut re, -1),
                _ => (&mut im, 1),
            };
            let mut ex = vec![0u32; width];
            if k > 0 {
                ex[k] = 1;
            }
            *target.entry(ex).or_insert_with(Rational::zero) += c * rat(sign);
        }
        let mut modsq = mul(&re, &re);
        for (k, v) in mul(&im, &im) {
            *modsq.entry(k).or_insert_with(Rational::zero) += v;
        }
        for _ in 0..e / 2 {
            acc = mul(&acc, &modsq);
        }
    }
    let mut total = RationalFunction::zero();
    let mut keys: Vec<_> = acc.keys().cloned().collect();
    keys.sort();
    for ex in keys {
        let pairs: Vec<(usize, u32)> = ex.iter().enumerate().filter(|(_, &r)| r > 0).map(|(k, &r)| (k, r)).collect();
        let v = limiting_monomial(&pairs)?;
        total = &total + &v.scale(&acc[&ex]);
    }
    Ok(total)
}

/// Finite-`N` ratio `𝔉_N / 𝔉_N^{(0)}(s)` (or the `𝔊` analogue):
/// `2^{-Σ2h_j n_j}·E_N^{(s)}[integrand]`.
pub fn finite_joint_moment(spec: &MomentSpec) -> Result<RationalFunction> {
    spec.validate()?;
    let big_n = match spec.size {
        Size::Finite(n) => n,
        Size::Limit => return Err(Error::InvalidSpec("finite_joint_moment needs a finite size".into())),
    };
    check_arity(big_n)?;
    let pairs = spec.even_pairs()?;
    let orders: Vec<usize> = pairs.iter().map(|p| p.0).collect();
    let exps: Vec<u32> = pairs.iter().map(|p| p.1).collect();
    let integrand = match spec.variant {
        Variant::Z => symmetric::z_variant_integrand(&orders, &exps, big_n)?,
        Variant::V => symmetric::v_variant_integrand(&orders, &exps, big_n)?,
    };
    let weight: usize = pairs.iter().map(|&(n, e)| n * e as usize).sum();
    let scale = Rational::new(BigInt::one(), num_traits::pow(BigInt::from(2), weight));
    Ok(hp_expectation(&integrand, big_n)?.scale(&scale))
}

/// `Γ(s+k)/Γ(s) = ∏_{l=0}^{k-1}(s+l)`-style products of shifted linear factors.
fn shifted_product(range: std::ops::RangeInclusive<i64>, a: i64, b: i64) -> Poly {
    range.fold(Poly::one(), |acc, l| &acc * &Poly::from_ints(&[l * b, a]))
}

/// Closed form for `E[Y_n^2]`-type second moments from the double binomial sum.
pub fn oracle_second_moment_y(n: usize) -> RationalFunction {
    let n = n as i64;
    let s_plus = |k: i64| shifted_product(0..=k - 1, 1, 1); // ∏_{l<k} (s + l)
    let two_s_minus_two =
        |lo: i64, hi: i64| -> Poly { (lo..=hi).fold(Poly::one(), |acc, l| &acc * &Poly::from_ints(&[l - 2, 2])) };
    let mut sum = RationalFunction::zero();
    for i in 0..=n {
        for j in 0..=n {
            let c = crate::algebra::rational::binomial(n, i) * crate::algebra::rational::binomial(n, j);
            let pow = -2 * n + i + j;
            let two_pow = if pow >= 0 {
                Rational::from_integer(num_traits::pow(BigInt::from(-2), pow as usize))
            } else {
                Rational::new(BigInt::one(), num_traits::pow(BigInt::from(-2), (-pow) as usize))
            };
            let numer = &(&(&s_plus(i) * &s_plus(j)) * &two_s_minus_two(i + 1, n)) * &two_s_minus_two(j + 1, n);
            let term = RationalFunction::new(numer, Poly::from_ints(&[-1 + i + j, 2])).unwrap();
            sum = &sum + &term.scale(&(Rational::from_integer(c) * two_pow));
        }
    }
    let den = (1..=n).fold(Poly::one(), |acc, l| {
        let f = Poly::from_ints(&[l - 2, 2]);
        &acc * &(&f * &f)
    });
    let pref = RationalFunction::new(Poly::from_ints(&[-1, 2]), den)
        .unwrap()
        .scale(&Rational::from_integer(num_traits::pow(BigInt::from(2), 2 * n as usize)));
    &pref * &sum
}

/// `2^{2n}(2s-1)/(2s-1+2n) ∏_{l=1}^n ((l+s-1)/(l+2s-2))^2`.
pub fn oracle_second_moment_v(n: usize) -> RationalFunction {
    let n = n as i64;
    let mut acc = RationalFunction::new(Poly::from_ints(&[-1, 2]), Poly::from_ints(&[-1 + 2 * n, 2])).unwrap();
    for l in 1..=n {
        let f = RationalFunction::new(Poly::from_ints(&[l - 1, 1]), Poly::from_ints(&[l - 2, 2])).unwrap();
        acc = &acc * &(&f * &f);
    }
    acc.scale(&Rational::from_integer(num_traits::pow(BigInt::from(2), 2 * n as usize)))
}

/// Explicit finite-`N` second-derivative moment ratio
/// `𝔉_N^{(2,0)}(1,s-1)/𝔉_N^{(0)}(s)`.
pub fn oracle_finite_n_f20(big_n: usize) -> RationalFunction {
    let n = rat(big_n as i64);
    let p = |c: &[i64]| Poly::from_ints(c);
    let a = &p(&[3, 2]) * &p(&[-1, 2]);
    let b = &a * &p(&[1, 2]);
    let rf = |num: Poly, den: &Poly| RationalFunction::new(num, den.clone()).unwrap();
    let n2 = &n * &n;
    let terms = [
        rf(Poly::constant(&n2 * &n2), &a),
        rf(p(&[0, 4]).scale(&(&n2 * &n)), &a),
        rf(p(&[-1, 0, 1, 2]).scale(&(rat(4) * &n2)), &b),
        rf(p(&[0, -8]).scale(&n), &b),
    ];
    terms.into_iter().sum::<RationalFunction>().scale(&Rational::new(BigInt::one(), BigInt::from(16)))
}

#[allow(clippy::needless_range_loop)]
fn det_rational(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            let f = &a[r][col] / &p;
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

fn cauchy_exponents(n: i64, m: i64, s: i64) -> (Vec<i64>, Vec<i64>) {
    let mut p = vec![s - 1 + n];
    let mut q = vec![s - 1 + m];
    for i in 2..=s {
        p.push(s - i);
        q.push(s - i);
    }
    (p, q)
}

/// `det[1/(p_i+q_j+1)]` by the Cauchy product formula.
pub fn cauchy_determinant(p: &[i64], q: &[i64]) -> Rational {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            num *= BigInt::from((p[j] - p[i]) * (q[j] - q[i]));
        }
        for &qj in q {
            den *= BigInt::from(p[i] + qj + 1);
        }
    }
    Rational::new(num, den)
}

/// `det[1/(p_i+q_j+1)]` by elimination, used to cross-check the product formula.
pub fn cauchy_determinant_direct(p: &[i64], q: &[i64]) -> Rational {
    let a = p
        .iter()
        .map(|&pi| q.iter().map(|&qj| Rational::new(BigInt::one(), BigInt::from(pi + qj + 1))).collect())
        .collect();
    det_rational(a)
}

/// Leading coefficient in `N` of the mixed `(n, m)` derivative of the
/// product average for integer `s`.
pub fn cauchy_det_leading_coeff(n: usize, m: usize, s: usize) -> Result<Rational> {
    if s == 0 {
        return Err(Error::Unsupported("s must be a positive integer".into()));
    }
    let (n, m, s) = (n as i64, m as i64, s as i64);
    let (p, q) = cauchy_exponents(n, m, s);
    let mut pref = Rational::new(
        factorial(n as u64) * factorial(m as u64),
        factorial((s - 1 + n) as u64) * factorial((s - 1 + m) as u64),
    );
    for j in 2..=s {
        let f = factorial((s - j) as u64);
        pref /= Rational::from_integer(&f * &f);
    }
    Ok(pref * cauchy_determinant(&p, &q))
}

/// `G(s+1)^2/G(2s+1)`; exact for integer `s`.
pub fn keating_snaith_constant_exact(s: usize) -> Rational {
    let g = |k: usize| crate::painleve::special::barnes_g_int(k);
    let gs = g(s + 1);
    Rational::new(&gs * &gs, g(2 * s + 1))
}

/// `G(s+1)^2/G(2s+1)` for real `s > 0`.
pub fn keating_snaith_constant(s: f64) -> f64 {
    if s.fract() == 0.0 && s > 0.0 && s < 64.0 {
        return crate::algebra::rational::to_f64(&keating_snaith_constant_exact(s as usize));
    }
    let lg = crate::painleve::special::log_barnes_g;
    (2.0 * lg(s + 1.0) - lg(2.0 * s + 1.0)).exp()
}

/// `G(s+1)^2/G(2s+1)·2^{-Σ2h_j n_j}`, the constant in front of the limit.
pub fn limit_prefactor(s: f64, weight: f64) -> f64 {
    keating_snaith_constant(s) * 2f64.powf(-weight)
}

/// Checks the rational function's denominator splits into factors `2s + c`.
pub fn denominator_is_linear_in_2s(f: &RationalFunction) -> bool {
    let mut d = f.den().clone();
    while d.degree().unwrap_or(0) > 0 {
        let mut found = false;
        for c in -40i64..=40 {
            let root = Rational::new(BigInt::from(-c), BigInt::from(2));
            if d.eval(&root).is_zero() {
                d = d.exact_div(&Poly::linear(rat(1), -root));
                found = true;
                break;
            }
        }
        if !found {
            return false;
        }
    }
    !d.lead().is_negative() || d.lead().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(Poly::from_ints(num), Poly::from_ints(den)).unwrap()
    }

    #[test]
    fn weight_moments() {
        assert!(weight_moment(1, 1).is_zero());
        assert_eq!(weight_moment(2, 1), rf(&[1], &[-1, 2]));
        assert_eq!(weight_moment(4, 1), rf(&[3], &[3, -8, 4]));
    }

    #[test]
    fn hp_examples() {
        assert_eq!(hp_expectation(&SymPoly::one(3), 3).unwrap(), RationalFunction::one());
        assert_eq!(hp_expectation(&SymPoly::parse("x1^2", 1).unwrap(), 1).unwrap(), rf(&[1], &[-1, 2]));
        let p = SymPoly::parse("x1^2 + 2*x1*x2 + x2^2", 2).unwrap();
        assert_eq!(hp_expectation(&p, 2).unwrap(), &rf(&[3], &[-1, 2]) - &rf(&[1], &[1, 2]));
    }

    #[test]
    fn limiting_v_second_moments() {
        for n in 1..=3 {
            assert_eq!(limiting_v_moment(&[n], &[2]).unwrap(), oracle_second_moment_v(n), "n={n}");
        }
    }

    #[test]
    fn limiting_first_order() {
        assert_eq!(limiting_moment(&[1], &[2]).unwrap(), rf(&[1], &[-1, 0, 4]));
        assert_eq!(oracle_second_moment_y(1), rf(&[1], &[-1, 0, 4]));
    }

    #[test]
    fn oracle_v_values() {
        assert_eq!(oracle_second_moment_v(1).eval(&rat(2)).unwrap(), ratio(16, 15));
        assert_eq!(oracle_second_moment_v(0), RationalFunction::one());
        assert_eq!(oracle_second_moment_v(2).eval(&rat(1)).unwrap(), ratio(16, 5));
    }

    #[test]
    fn f20_examples() {
        assert_eq!(oracle_finite_n_f20(1), RationalFunction::constant(ratio(1, 16)));
        assert_eq!(oracle_finite_n_f20(2).eval(&rat(2)).unwrap(), ratio(2, 5));
        let spec = MomentSpec::new(vec![2, 0], vec![2.0, 0.0], Variant::Z, Size::Finite(1)).unwrap();
        assert_eq!(finite_joint_moment(&spec).unwrap(), RationalFunction::constant(ratio(1, 16)));
    }

    #[test]
    fn cauchy_leading() {
        assert_eq!(cauchy_det_leading_coeff(0, 0, 1).unwrap(), rat(1));
        assert_eq!(cauchy_det_leading_coeff(0, 0, 2).unwrap(), ratio(1, 12));
        assert_eq!(cauchy_det_leading_coeff(1, 1, 2).unwrap(), ratio(1, 45));
    }

    #[test]
    fn keating_snaith() {
        assert_eq!(keating_snaith_constant_exact(1), rat(1));
        assert_eq!(keating_snaith_constant_exact(2), ratio(1, 12));
    }

    #[test]
    fn spec_validation() {
        assert!(MomentSpec::new(vec![1, 2], vec![2.0, 2.0], Variant::Z, Size::Limit).is_err());
        assert!(MomentSpec::new(vec![1], vec![2.0, 2.0], Variant::Z, Size::Limit).is_err());
        let s = MomentSpec::new(vec![1], vec![3.0], Variant::Z, Size::Finite(2)).unwrap();
        assert!(matches!(finite_joint_moment(&s), Err(Error::UnsupportedOddExponent(_))));
    }
}
