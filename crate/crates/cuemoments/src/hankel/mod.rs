//! Hankel determinants of confluent hypergeometric functions.
//!
//! For integer `s` the functions
//!
//! ```text
//! θ_m(t) = e^{-t} U(1-N-s, 2-2N-2s+m; 2t)
//!        = e^{-t} (-1)^{N+s-1} (N+s-1)! L_{N+s-1}^{(1-2N-2s+m)}(2t)
//! ```
//!
//! are `e^{-t}` times integer polynomials, so the determinants
//! `Ψ_{N,λ} = det[θ_{i+j+λ_{N-j}}]` are `e^{-Nt}` times rational polynomials
//! and every identity below is checked in exact arithmetic.
//!
//! Derivatives with respect to the higher times `t_q` at `t_2 = … = 0` act on
//! a single entry by `θ_γ ↦ θ_{γ+q}`; the `t`-derivative acts by
//! `θ_γ ↦ θ_γ - 2θ_{γ+1}`.

mod appendix;
mod relations;
mod trace;

pub use appendix::{
    appendix_matrices, initial_condition_residuals, lemma_t1_residual, vector_recursion_residual,
    verify_vector_recursion, AppendixMatrices, Matrix, Perturbation,
};
pub use relations::{
    collected_expansion, expansion_coeff, first_relation_residual, mixed_derivative_normalized, normalized_l,
    second_relation_residual, sign_choice_multiplicity, ComplexRational, ARGUMENT_DIVIDED_BY_N,
};
pub use trace::{
    alternating_identity_residual, trace_adjugate, trace_adjugate_reversed, weighted_identity_residual,
    WEIGHTED_IDENTITY_OFFSET,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::rational::{binomial, factorial, rat, Rational};
use crate::algebra::{ExpPolyFunction, Poly};
use crate::error::{Error, Result};

/// Upper bound on `Σ ℓ_q` accepted by [`mixed_derivative`].
pub const MAX_MIXED_ORDER: usize = 12;

/// Polynomial factor of `θ_m` for parameters `(N, s)`.
pub fn theta_poly(m: usize, big_n: usize, s: usize) -> Poly {
    let n = (big_n + s - 1) as i64;
    let alpha = 1 - 2 * big_n as i64 - 2 * s as i64 + m as i64;
    let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
    let pref = sign * factorial(n as u64);
    // L_n^{(α)}(2t) = Σ_k C(n+α, n-k) (-2t)^k / k!
    let coeffs = (0..=n)
        .map(|k| {
            let c = binomial(n + alpha, n - k) * num_traits::pow(BigInt::from(-2), k as usize) * &pref;
            Rational::new(c, factorial(k as u64))
        })
        .collect();
    Poly::new(coeffs)
}

/// `θ_m` as an exponential polynomial; only integer `s ≥ 1` is supported.
pub fn theta(m: usize, big_n: usize, s: usize) -> Result<ExpPolyFunction> {
    if big_n == 0 || s == 0 {
        return Err(Error::Unsupported("theta needs N ≥ 1 and integer s ≥ 1".into()));
    }
    Ok(ExpPolyFunction::new(1, theta_poly(m, big_n, s)))
}

/// Precomputed `θ_0..θ_{m_max}` for one `(N, s)`.
#[derive(Clone, Debug)]
pub struct ThetaFamily {
    pub big_n: usize,
    pub s: usize,
    table: Vec<Poly>,
}

impl ThetaFamily {
    pub fn new(big_n: usize, s: usize, m_max: usize) -> Result<Self> {
        if big_n == 0 || s == 0 {
            return Err(Error::Unsupported("theta needs N ≥ 1 and integer s ≥ 1".into()));
        }
        let table = (0..=m_max).map(|m| theta_poly(m, big_n, s)).collect();
        Ok(ThetaFamily { big_n, s, table })
    }

    pub fn m_max(&self) -> usize {
        self.table.len() - 1
    }

    /// Polynomial factor of `θ_m`; computed on the fly past the table.
    pub fn poly(&self, m: usize) -> Poly {
        match self.table.get(m) {
            Some(p) => p.clone(),
            None => theta_poly(m, self.big_n, self.s),
        }
    }

    pub fn get(&self, m: usize) -> ExpPolyFunction {
        ExpPolyFunction::new(1, self.poly(m))
    }

    /// `dθ_m/dt - (θ_m - 2θ_{m+1})`, the polynomial factor.
    pub fn derivative_residual(&self, m: usize) -> Poly {
        let d = self.get(m).derivative().poly;
        &d - &(&self.poly(m) - &self.poly(m + 1).scale(&rat(2)))
    }

    /// `2t·θ_{γ+2} - (N+s-1-γ)θ_γ - (2-2N-2s+γ+2t)θ_{γ+1}`.
    pub fn three_term_residual(&self, gamma: usize) -> Poly {
        let (n, s, g) = (self.big_n as i64, self.s as i64, gamma as i64);
        let two_t = Poly::from_ints(&[0, 2]);
        let lhs = &two_t * &self.poly(gamma + 2);
        let a = self.poly(gamma).scale(&rat(n + s - 1 - g));
        let b = &Poly::from_ints(&[2 - 2 * n - 2 * s + g, 2]) * &self.poly(gamma + 1);
        &(&lhs - &a) - &b
    }
}

/// Weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        parts.retain(|&p| p > 0);
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec(format!("partition parts {parts:?} must be weakly decreasing")));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `λ_{k,q} = (k-q+1, 1^{q-1})`, the hook with `q-1` trailing ones.
    pub fn hook(k: usize, q: usize) -> Result<Self> {
        if q == 0 || q > k {
            return Err(Error::ConstraintViolation(format!("hook needs 1 ≤ q ≤ k, got k={k}, q={q}")));
        }
        let mut parts = vec![k - q + 1];
        parts.extend(std::iter::repeat_n(1, q - 1));
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `λ_b` with the 1-based index and zero padding.
    pub fn part(&self, b: usize) -> usize {
        if b == 0 {
            return 0;
        }
        self.0.get(b - 1).copied().unwrap_or(0)
    }
}

/// `Ψ_{N,λ}` with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct HankelValue {
    pub big_n: usize,
    pub s: usize,
    pub lambda: Partition,
    pub value: ExpPolyFunction,
}

/// Index of entry `(i, j)` of `A_{N,λ}` shifted by `h`, zero-based.
pub fn entry_index(big_n: usize, lambda: &Partition, i: usize, j: usize, h: usize) -> usize {
    i + j + lambda.part(big_n - j) + h
}

/// Polynomial factors of `A_{N,λ}` with extra per-column shifts.
pub(crate) fn hankel_matrix(fam: &ThetaFamily, lambda: &Partition, add: &[usize]) -> Vec<Vec<Poly>> {
    let n = fam.big_n;
    (0..n).map(|i| (0..n).map(|j| fam.poly(entry_index(n, lambda, i, j, add[j]))).collect()).collect()
}

/// Fraction-free Bareiss determinant over `Q[t]`.
pub fn det_poly(mut a: Vec<Vec<Poly>>) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = v.exact_div(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

fn family_for(big_n: usize, s: usize, lambda: &Partition, extra: usize) -> Result<ThetaFamily> {
    let top = 2 * big_n + lambda.part(1) + extra + 2;
    ThetaFamily::new(big_n, s, top)
}

/// `Ψ_{N,S_hλ}`: determinant of `A_{N,λ}` with every index raised by `h`;
/// zero when `λ` has more than `N` parts.
pub fn hankel_det(big_n: usize, s: usize, lambda: &Partition, h: usize) -> Result<HankelValue> {
    let fam = family_for(big_n, s, lambda, h)?;
    Ok(hankel_det_with(&fam, lambda, h))
}

pub fn hankel_det_with(fam: &ThetaFamily, lambda: &Partition, h: usize) -> HankelValue {
    let n = fam.big_n;
    let poly = if lambda.len() > n { Poly::zero() } else { det_poly(hankel_matrix(fam, lambda, &vec![h; n])) };
    HankelValue { big_n: n, s: fam.s, lambda: lambda.clone(), value: ExpPolyFunction::new(n as u32, poly) }
}

/// `d^k/dt^k Ψ_{N,λ}` by formal differentiation.
pub fn hankel_derivative(h: &HankelValue, order: usize) -> ExpPolyFunction {
    h.value.nth_derivative(order)
}

/// `dΨ_{N,λ}/dt` by the column rule `θ_γ ↦ θ_γ - 2θ_{γ+1}`, one column at a time.
pub fn hankel_derivative_by_columns(big_n: usize, s: usize, lambda: &Partition) -> Result<ExpPolyFunction> {
    let fam = family_for(big_n, s, lambda, 1)?;
    let n = big_n;
    if lambda.len() > n {
        return Ok(ExpPolyFunction::zero(n as u32));
    }
    let base = hankel_matrix(&fam, lambda, &vec![0; n]);
    let mut total = Poly::zero();
    for j in 0..n {
        let mut m = base.clone();
        for (i, row) in m.iter_mut().enumerate() {
            let g = entry_index(n, lambda, i, j, 0);
            row[j] = &fam.poly(g) - &fam.poly(g + 1).scale(&rat(2));
        }
        total = &total + &det_poly(m);
    }
    Ok(ExpPolyFunction::new(n as u32, total))
}

/// Orders `ℓ_q` of the derivatives `∂/∂t_q`, keyed by `q ≥ 1`.
pub type DerivativeOrders = BTreeMap<usize, usize>;

/// Count vectors distributing `count` identical items over `cols` columns.
fn compositions(count: usize, cols: usize) -> Vec<Vec<usize>> {
    if cols == 1 {
        return vec![vec![count]];
    }
    let mut out = Vec::new();
    for first in 0..=count {
        for mut rest in compositions(count - first, cols - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `∏_q ∂^{ℓ_q}/∂t_q^{ℓ_q} Ψ_{N,λ}` at `t_2 = … = 0`: each derivative raises
/// the indices of one column by `q`, summed over all placements.
pub fn mixed_derivative_of(
    big_n: usize,
    s: usize,
    lambda: &Partition,
    orders: &DerivativeOrders,
) -> Result<ExpPolyFunction> {
    let total: usize = orders.values().sum();
    if total > MAX_MIXED_ORDER {
        return Err(Error::BoundExceeded(format!("Σℓ_q = {total} exceeds {MAX_MIXED_ORDER}")));
    }
    if orders.contains_key(&0) {
        return Err(Error::InvalidSpec("derivative index q must be at least 1".into()));
    }
    let n = big_n;
    if lambda.len() > n {
        return Ok(ExpPolyFunction::zero(n as u32));
    }
    let weight: usize = orders.iter().map(|(q, l)| q * l).sum();
    let fam = family_for(n, s, lambda, weight)?;
    // placements weighted by multinomial counts, collected by total column shift
    let mut by_shift: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
    by_shift.insert(vec![0; n], BigInt::one());
    for (&q, &l) in orders {
        if l == 0 {
            continue;
        }
        let mut next = BTreeMap::new();
        for comp in compositions(l, n) {
            let mult = comp.iter().fold(factorial(l as u64), |acc, &c| acc / factorial(c as u64));
            for (shift, c) in &by_shift {
                let s2: Vec<usize> = shift.iter().zip(&comp).map(|(a, b)| a + q * b).collect();
                *next.entry(s2).or_insert_with(BigInt::zero) += c * &mult;
            }
        }
        by_shift = next;
    }
    let terms: Vec<(Vec<usize>, BigInt)> = by_shift.into_iter().collect();
    let eval = |(shift, c): &(Vec<usize>, BigInt)| {
        det_poly(hankel_matrix(&fam, lambda, shift)).scale(&Rational::from_integer(c.clone()))
    };
    #[cfg(feature = "parallel")]
    let total_poly = {
        use rayon::prelude::*;
        terms.par_iter().map(eval).reduce(Poly::zero, |a, b| &a + &b)
    };
    #[cfg(not(feature = "parallel"))]
    let total_poly = terms.iter().map(eval).fold(Poly::zero(), |a, b| &a + &b);
    Ok(ExpPolyFunction::new(n as u32, total_poly))
}

/// [`mixed_derivative_of`] for `λ = ∅`.
pub fn mixed_derivative(big_n: usize, s: usize, orders: &DerivativeOrders) -> Result<ExpPolyFunction> {
    mixed_derivative_of(big_n, s, &Partition::empty(), orders)
}
