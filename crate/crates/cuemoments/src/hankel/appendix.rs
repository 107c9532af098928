//! The recursion between hook-shifted determinants.
//!
//! With `v[l] = (Ψ_{N,λ_{l,1}}, …, Ψ_{N,λ_{l,l}})` and everything evaluated at
//! `t_2 = … = t_k = 0`,
//!
//! ```text
//! v[l] = B (½∂_t - N/2) (v[l-1], 0) + (Q_1 + Q_0/(2t)) v[l-1] + Q_2/(2t) v[l-2].
//! ```
//!
//! Only `Q_2` depends on `N` and `s`. The matrices `Q_m` with `m ≥ 3` multiply
//! derivatives in the higher times and vanish from the identity at this point;
//! they are built for completeness.

use num_traits::{Signed, Zero};

use crate::algebra::rational::{rat, ratio, Rational};
use crate::algebra::{ExpPolyFunction, Poly};
use crate::error::{Error, Result};

use super::{hankel_det_with, trace_adjugate, Partition, ThetaFamily};

pub type Matrix = Vec<Vec<Rational>>;

/// A deliberate change to one matrix entry, used as a negative control.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Perturbation {
    #[default]
    None,
    /// Adds one to the top-left entry of `Q_2`.
    Q2Entry,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AppendixMatrices {
    pub l: usize,
    pub b: Matrix,
    /// `Q_0, Q_1, …, Q_{k+1}`.
    pub q: Vec<Matrix>,
}

fn sign(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn build(rows: usize, cols: usize, f: impl Fn(i64, i64) -> Rational) -> Matrix {
    (1..=rows as i64).map(|i| (1..=cols as i64).map(|j| f(i, j)).collect()).collect()
}

fn matrix_b(l: usize) -> Matrix {
    let li = l as i64;
    build(l, l, |i, j| {
        if j == li {
            ratio(sign(i - 1), li)
        } else if j >= i {
            ratio(sign(i + j - 1), j * (j + 1))
        } else if j == i - 1 {
            ratio(-1, i)
        } else {
            rat(0)
        }
    })
}

fn matrix_q0(l: usize, s: usize) -> Matrix {
    let (li, s) = (l as i64, s as i64);
    build(l, l - 1, |i, j| {
        if i <= j {
            ratio(sign(i + j) * (j * (li - j - 2) + 1 - 2 * s), j * (j + 1))
        } else if j == i - 1 {
            ratio(j * (j + 2 * s) - li + 1, j + 1)
        } else {
            rat(0)
        }
    })
}

fn matrix_q1(l: usize) -> Matrix {
    build(l, l - 1, |i, j| {
        if i <= j {
            ratio(sign(i + j), j * (j + 1))
        } else if j == i - 1 {
            ratio(-j, j + 1)
        } else {
            rat(0)
        }
    })
}

fn matrix_q2(l: usize, big_n: usize, s: usize) -> Matrix {
    let (li, n, s) = (l as i64, big_n as i64, s as i64);
    build(l, l.saturating_sub(2), |i, j| {
        if i - 1 <= j {
            let num = (s - 2) * n + j * (j + 3) - (j + 2) * (li - 2) + 2 * (s - 1);
            ratio(sign(i + j) * num, (j + 1) * (j + 2))
        } else if j == i - 2 {
            ratio((j + s) * (j - n), j + 2)
        } else {
            rat(0)
        }
    })
}

fn matrix_qm(l: usize, m: usize) -> Matrix {
    let mi = m as i64;
    build(l, l + m - 2, |i, j| {
        if i == 1 && j < mi {
            rat(sign(mi - j - 1))
        } else if j > i + mi - 2 {
            ratio(sign(i + j + mi) * (2 - mi), (j - mi + 1) * (j - mi + 2))
        } else if i != 1 && j == i + mi - 2 {
            ratio(i + mi - 2, i)
        } else {
            rat(0)
        }
    })
}

/// `B^{(l)}` and `Q_0^{(l)}, …, Q_{k+1}^{(l)}`.
///
/// In `B^{(l)}` the last column is `(-1)^{i-1}/l` throughout; its clash with
/// the `j ≥ i` rule is immaterial because it multiplies a zero entry.
pub fn appendix_matrices(
    l: usize,
    k: usize,
    big_n: usize,
    s: usize,
    perturb: Perturbation,
) -> Result<AppendixMatrices> {
    if l < 3 {
        return Err(Error::ConstraintViolation(format!("appendix matrices need l ≥ 3, got {l}")));
    }
    if k < 2 {
        return Err(Error::ConstraintViolation(format!("appendix matrices need k ≥ 2, got {k}")));
    }
    let mut q = vec![matrix_q0(l, s), matrix_q1(l), matrix_q2(l, big_n, s)];
    for m in 3..=k + 1 {
        q.push(matrix_qm(l, m));
    }
    if perturb == Perturbation::Q2Entry {
        if let Some(e) = q[2].first_mut().and_then(|r| r.first_mut()) {
            *e += rat(1);
        }
    }
    Ok(AppendixMatrices { l, b: matrix_b(l), q })
}

fn hook_vector(fam: &ThetaFamily, b: usize) -> Result<Vec<Poly>> {
    (1..=b).map(|p| Ok(hankel_det_with(fam, &Partition::hook(b, p)?, 0).value.poly)).collect()
}

fn apply(m: &Matrix, v: &[Poly]) -> Vec<Poly> {
    m.iter()
        .map(|row| row.iter().zip(v).filter(|(c, _)| !c.is_zero()).fold(Poly::zero(), |acc, (c, p)| &acc + &p.scale(c)))
        .collect()
}

/// `2t·(lhs - rhs)` of the vector recursion, entrywise polynomial factors of `e^{-Nt}`.
pub fn vector_recursion_residual(
    l: usize,
    k: usize,
    big_n: usize,
    s: usize,
    perturb: Perturbation,
) -> Result<Vec<Poly>> {
    let mats = appendix_matrices(l, k, big_n, s, perturb)?;
    let fam = ThetaFamily::new(big_n, s, 2 * big_n + l + 2)?;
    let n = big_n as u32;
    let lhs = hook_vector(&fam, l)?;
    let prev = hook_vector(&fam, l - 1)?;
    let prev2 = hook_vector(&fam, l - 2)?;
    // (½∂_t - N/2) on each padded entry
    let mut ops: Vec<Poly> = prev
        .iter()
        .map(|p| {
            let f = ExpPolyFunction::new(n, p.clone());
            (&f.derivative().poly.scale(&ratio(1, 2))) - &p.scale(&ratio(big_n as i64, 2))
        })
        .collect();
    ops.push(Poly::zero());
    let two_t = Poly::from_ints(&[0, 2]);
    let b_part = apply(&mats.b, &ops);
    let q1 = apply(&mats.q[1], &prev);
    let q0 = apply(&mats.q[0], &prev);
    let q2 = apply(&mats.q[2], &prev2);
    Ok((0..l)
        .map(|i| {
            let rhs = &(&(&two_t * &(&b_part[i] + &q1[i])) + &q0[i]) + &q2[i];
            &(&two_t * &lhs[i]) - &rhs
        })
        .collect())
}

/// Largest absolute entry of `e^{Nt}(lhs - rhs)` at `t = t0`.
pub fn verify_vector_recursion(
    l: usize,
    k: usize,
    big_n: usize,
    s: usize,
    t0: &Rational,
    perturb: Perturbation,
) -> Result<Rational> {
    if t0.is_zero() {
        return Err(Error::PoleAtEvaluationPoint("t = 0".into()));
    }
    let res = vector_recursion_residual(l, k, big_n, s, perturb)?;
    let two_t0 = t0 * rat(2);
    Ok(res.iter().map(|p| (p.eval(t0) / &two_t0).abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a }))
}

/// `Ψ_{N,λ,1} - (N/2)Ψ_{N,λ} + ½ dΨ_{N,λ}/dt`.
pub fn lemma_t1_residual(big_n: usize, s: usize, lambda: &Partition) -> Result<Poly> {
    let lhs = trace_adjugate(big_n, s, lambda, 1, false)?;
    let fam = ThetaFamily::new(big_n, s, 2 * big_n + lambda.part(1) + 2)?;
    let psi = hankel_det_with(&fam, lambda, 0).value;
    let rhs = &psi.poly.scale(&ratio(big_n as i64, 2)) - &psi.derivative().poly.scale(&ratio(1, 2));
    Ok(&lhs.poly - &rhs)
}

/// Residuals of the two initial conditions
/// `Ψ_{N,λ_{2,q}} = Ψ''/8 - (N/4)Ψ' + (N²/8)Ψ ± ½Ψ_{N,∅,2}`, `+` for `q = 1`, `-` for `q = 2`.
pub fn initial_condition_residuals(big_n: usize, s: usize) -> Result<[Poly; 2]> {
    let fam = ThetaFamily::new(big_n, s, 2 * big_n + 4)?;
    let psi = hankel_det_with(&fam, &Partition::empty(), 0).value;
    let n = big_n as i64;
    let d1 = psi.derivative();
    let d2 = d1.derivative();
    let common = &(&d2.poly.scale(&ratio(1, 8)) - &d1.poly.scale(&ratio(n, 4))) + &psi.poly.scale(&ratio(n * n, 8));
    let half_t2 = trace_adjugate(big_n, s, &Partition::empty(), 2, false)?.poly.scale(&ratio(1, 2));
    let first = hankel_det_with(&fam, &Partition::hook(2, 1)?, 0).value.poly;
    let second = hankel_det_with(&fam, &Partition::hook(2, 2)?, 0).value.poly;
    Ok([&first - &(&common + &half_t2), &second - &(&common - &half_t2)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_entries() {
        let m = appendix_matrices(4, 3, 2, 2, Perturbation::None).unwrap();
        // (-1)^{i+j-1}/(j(j+1)) at i = j = 1
        assert_eq!(m.b[0][0], ratio(-1, 2));
        for i in 2..=4usize {
            assert_eq!(m.q[1][i - 1][i - 2], ratio(-(i as i64 - 1), i as i64));
        }
        for i in 3..=4i64 {
            let j = i - 2;
            assert_eq!(m.q[2][(i - 1) as usize][(j - 1) as usize], ratio((j + 2) * (j - 2), j + 2));
        }
        assert_eq!(m.q.len(), 5);
        assert_eq!(m.q[4][0].len(), 4 + 4 - 2);
    }

    #[test]
    fn only_q2_depends_on_parameters() {
        let a = appendix_matrices(4, 3, 1, 1, Perturbation::None).unwrap();
        let b = appendix_matrices(4, 3, 3, 1, Perturbation::None).unwrap();
        assert_eq!(a.b, b.b);
        assert_eq!(a.q[1], b.q[1]);
        assert_eq!(a.q[0], b.q[0]);
        assert_eq!(a.q[3], b.q[3]);
        assert_ne!(a.q[2], b.q[2]);
    }

    #[test]
    fn recursion_vanishes() {
        for n in 1..=3 {
            for s in 1..=3 {
                for l in 3..=4 {
                    let r = vector_recursion_residual(l, 2, n, s, Perturbation::None).unwrap();
                    assert!(r.iter().all(Poly::is_zero), "l={l} N={n} s={s}");
                }
            }
        }
    }

    #[test]
    fn perturbation_detected() {
        let r = verify_vector_recursion(3, 2, 2, 2, &rat(1), Perturbation::Q2Entry).unwrap();
        assert!(!r.is_zero());
        assert!(appendix_matrices(2, 2, 1, 1, Perturbation::None).is_err());
    }

    #[test]
    fn initial_conditions_and_t1() {
        for n in 1..=3 {
            for s in 1..=3 {
                let [a, b] = initial_condition_residuals(n, s).unwrap();
                assert!(a.is_zero() && b.is_zero(), "N={n} s={s}");
                for lam in [Partition::empty(), Partition::hook(3, 2).unwrap()] {
                    assert!(lemma_t1_residual(n, s, &lam).unwrap().is_zero());
                }
            }
        }
    }
}
