//! Adjugate traces `Ψ_{N,λ,h}` and their weighted versions.

use crate::algebra::rational::{rat, Rational};
use crate::algebra::{ExpPolyFunction, Poly};
use crate::error::Result;

use super::{det_poly, entry_index, hankel_det_with, hankel_matrix, Partition, ThetaFamily};

/// Offset in the weighted alternating identity; fitted over `N ≤ 3`, `s ≤ 3`, `l ≤ 4`.
pub const WEIGHTED_IDENTITY_OFFSET: i64 = 0;

fn family(big_n: usize, s: usize, lambda: &Partition, h: usize) -> Result<ThetaFamily> {
    ThetaFamily::new(big_n, s, 2 * big_n + lambda.part(1) + h + 2)
}

/// Columns of `A_{N,S_hλ}`, optionally weighted entrywise by the index.
fn shifted(fam: &ThetaFamily, lambda: &Partition, h: usize, weighted: bool) -> Vec<Vec<Poly>> {
    let n = fam.big_n;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let g = entry_index(n, lambda, i, j, h);
                    let p = fam.poly(g);
                    if weighted {
                        p.scale(&rat(g as i64))
                    } else {
                        p
                    }
                })
                .collect()
        })
        .collect()
}

/// `Tr[adj(A_{N,λ}) A^{(w)}_{N,S_hλ}] = Σ_j det(A_{N,λ} with column j from the shifted matrix)`.
///
/// This is the first-order variation of `det A_{N,λ}` in the direction of the
/// shifted matrix, so for `h = q` it equals `∂Ψ_{N,λ}/∂t_q` at `t_2 = … = 0`.
pub fn trace_adjugate(big_n: usize, s: usize, lambda: &Partition, h: usize, weighted: bool) -> Result<ExpPolyFunction> {
    let fam = family(big_n, s, lambda, h)?;
    let n = big_n;
    if lambda.len() > n {
        return Ok(ExpPolyFunction::zero(n as u32));
    }
    let base = hankel_matrix(&fam, lambda, &vec![0; n]);
    let other = shifted(&fam, lambda, h, weighted);
    let mut total = Poly::zero();
    for j in 0..n {
        let mut m = base.clone();
        for (row, src) in m.iter_mut().zip(&other) {
            row[j] = src[j].clone();
        }
        total = &total + &det_poly(m);
    }
    Ok(ExpPolyFunction::new(n as u32, total))
}

/// `Tr[adj(A_{N,S_hλ}) A_{N,λ}]`, the product taken in the opposite order.
pub fn trace_adjugate_reversed(big_n: usize, s: usize, lambda: &Partition, h: usize) -> Result<ExpPolyFunction> {
    let fam = family(big_n, s, lambda, h)?;
    let n = big_n;
    if lambda.len() > n {
        return Ok(ExpPolyFunction::zero(n as u32));
    }
    let base = shifted(&fam, lambda, h, false);
    let other = hankel_matrix(&fam, lambda, &vec![0; n]);
    let mut total = Poly::zero();
    for j in 0..n {
        let mut m = base.clone();
        for (row, src) in m.iter_mut().zip(&other) {
            row[j] = src[j].clone();
        }
        total = &total + &det_poly(m);
    }
    Ok(ExpPolyFunction::new(n as u32, total))
}

fn hook_sum(big_n: usize, s: usize, l: usize, coeff: impl Fn(usize) -> Rational) -> Result<Poly> {
    let fam = ThetaFamily::new(big_n, s, 2 * big_n + l + 2)?;
    let mut acc = Poly::zero();
    for j in 1..=l {
        let sign = if j % 2 == 1 { rat(1) } else { rat(-1) };
        let h = hankel_det_with(&fam, &Partition::hook(l, j)?, 0);
        acc = &acc + &h.value.poly.scale(&(sign * coeff(j)));
    }
    Ok(acc)
}

/// `Ψ_{N,∅,l} - Σ_{j=1}^{l} (-1)^{j-1} Ψ_{N,λ_{l,j}}`, polynomial factor.
pub fn alternating_identity_residual(big_n: usize, s: usize, l: usize) -> Result<Poly> {
    let lhs = trace_adjugate(big_n, s, &Partition::empty(), l, false)?.poly;
    Ok(&lhs - &hook_sum(big_n, s, l, |_| rat(1))?)
}

/// `Ψ^{(w)}_{N,∅,l} - Σ_{j=1}^{l} (-1)^{j-1}(2N-2j+l+α) Ψ_{N,λ_{l,j}}`.
pub fn weighted_identity_residual(big_n: usize, s: usize, l: usize, alpha: i64) -> Result<Poly> {
    let lhs = trace_adjugate(big_n, s, &Partition::empty(), l, true)?.poly;
    let n = big_n as i64;
    let rhs = hook_sum(big_n, s, l, |j| rat(2 * n - 2 * j as i64 + l as i64 + alpha))?;
    Ok(&lhs - &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hankel::{mixed_derivative_of, theta_poly, DerivativeOrders};

    #[test]
    fn one_by_one() {
        let lam = Partition::new(vec![2]).unwrap();
        let v = trace_adjugate(1, 2, &lam, 3, false).unwrap();
        assert_eq!(v.poly, theta_poly(5, 1, 2));
    }

    #[test]
    fn alternating_identity() {
        for n in 1..=3 {
            for s in 1..=2 {
                for l in 1..=4 {
                    assert!(alternating_identity_residual(n, s, l).unwrap().is_zero(), "N={n} s={s} l={l}");
                }
            }
        }
    }

    #[test]
    fn weighted_identity() {
        for n in 1..=3 {
            for l in 1..=4 {
                let r = weighted_identity_residual(n, 2, l, WEIGHTED_IDENTITY_OFFSET).unwrap();
                assert!(r.is_zero(), "N={n} l={l}");
                assert!(!weighted_identity_residual(n, 2, l, 1).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn reversed_order_differs_beyond_two() {
        let lam = Partition::empty();
        let a = trace_adjugate(3, 1, &lam, 2, false).unwrap();
        let b = trace_adjugate_reversed(3, 1, &lam, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn matches_single_time_derivative() {
        let lam = Partition::new(vec![1]).unwrap();
        for q in 1..=3 {
            let mut ord = DerivativeOrders::new();
            ord.insert(q, 1);
            assert_eq!(trace_adjugate(2, 2, &lam, q, false).unwrap(), mixed_derivative_of(2, 2, &lam, &ord).unwrap());
        }
    }
}
