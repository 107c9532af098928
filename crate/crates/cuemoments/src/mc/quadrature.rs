//! Tensor Gauss–Legendre quadrature against the Cauchy density for `N ≤ 3`.
//!
//! With `x_i = tan u_i` the weight `Δ(x)² ∏(1+x_i²)^{-s-N} dx` becomes
//! `∏_{i<j} sin²(u_i - u_j) ∏_i cos^{2s} u_i du` on `(-π/2, π/2)^N`.

use std::f64::consts::FRAC_PI_2;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use serde::{Deserialize, Serialize};

use crate::algebra::SymPoly;
use crate::error::{Error, Result};
use crate::Execution;

pub const MAX_QUADRATURE_ARITY: usize = 3;
/// Largest tensor grid evaluated.
const MAX_POINTS: usize = 1 << 22;
/// Differences below this multiple of `E|f|` are rounding noise.
const ROUNDOFF: f64 = 1e-13;

type ComplexFn<'a> = dyn Fn(&[f64]) -> (f64, f64) + Sync + 'a;

pub enum Integrand<'a> {
    Poly(&'a SymPoly),
    /// Must grow slower than `|x_i|^{2s+1}` in each coordinate.
    Real(&'a (dyn Fn(&[f64]) -> f64 + Sync)),
    Complex(&'a (dyn Fn(&[f64]) -> (f64, f64) + Sync)),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions {
    pub nodes_per_dim: usize,
    /// Relative agreement required between a rule and its doubling.
    pub rel_tol: f64,
    pub exec: Execution,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions { nodes_per_dim: 16, rel_tol: 1e-10, exec: Execution::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureValue {
    pub re: f64,
    pub im: f64,
    /// Difference from the previous rule.
    pub error_estimate: f64,
    pub nodes_per_dim: usize,
}

struct Sums {
    re: f64,
    im: f64,
    abs: f64,
    weight: f64,
}

impl Sums {
    fn zero() -> Self {
        Sums { re: 0.0, im: 0.0, abs: 0.0, weight: 0.0 }
    }

    fn add(self, o: Sums) -> Sums {
        Sums { re: self.re + o.re, im: self.im + o.im, abs: self.abs + o.abs, weight: self.weight + o.weight }
    }
}

fn grid(n: usize, big_n: usize, s: f64, f: &(dyn Fn(&[f64]) -> (f64, f64) + Sync), exec: Execution) -> Sums {
    let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("positive node count"));
    let pts: Vec<(f64, f64)> =
        rule.as_node_weight_pairs().iter().map(|(x, w)| (FRAC_PI_2 * x, FRAC_PI_2 * w)).collect();
    // cos^{2s} u and tan u per node
    let cos_w: Vec<f64> = pts.iter().map(|&(u, w)| w * u.cos().powf(2.0 * s)).collect();
    let tan: Vec<f64> = pts.iter().map(|&(u, _)| u.tan()).collect();
    let outer = |i0: usize| -> Sums {
        let mut acc = Sums::zero();
        let mut idx = vec![0usize; big_n];
        idx[0] = i0;
        let inner = n.pow(big_n as u32 - 1);
        let mut x = vec![0.0; big_n];
        for flat in 0..inner {
            let mut r = flat;
            for slot in idx.iter_mut().skip(1) {
                *slot = r % n;
                r /= n;
            }
            let mut w = 1.0;
            for (a, &ia) in idx.iter().enumerate() {
                w *= cos_w[ia];
                x[a] = tan[ia];
                for &ib in &idx[..a] {
                    let d = (pts[ia].0 - pts[ib].0).sin();
                    w *= d * d;
                }
            }
            if w == 0.0 {
                continue;
            }
            let (re, im) = f(&x);
            acc.re += w * re;
            acc.im += w * im;
            acc.abs += w * re.hypot(im);
            acc.weight += w;
        }
        acc
    };
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(outer).reduce(Sums::zero, Sums::add);
    }
    let _ = exec;
    (0..n).map(outer).fold(Sums::zero(), Sums::add)
}

/// `E_N^{(s)}[f]` by tensor Gauss–Legendre, doubling the nodes per dimension
/// until two successive rules agree to `rel_tol` relative to `|E f|`, or to
/// rounding level relative to `E|f|` when `E f` cancels to (near) zero.
pub fn quadrature_expectation(
    big_n: usize,
    s: f64,
    integrand: &Integrand<'_>,
    opts: &QuadratureOptions,
) -> Result<QuadratureValue> {
    if big_n == 0 || big_n > MAX_QUADRATURE_ARITY {
        return Err(Error::ArityBoundExceeded { arity: big_n, max: MAX_QUADRATURE_ARITY });
    }
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidSpec(format!("s = {s} must be positive")));
    }
    if opts.nodes_per_dim == 0 {
        return Err(Error::InvalidSpec("nodes_per_dim must be positive".into()));
    }
    let compiled;
    let f: Box<ComplexFn<'_>> = match integrand {
        Integrand::Poly(p) => {
            if p.arity() != big_n {
                return Err(Error::InvalidSpec(format!("polynomial arity {} differs from N = {big_n}", p.arity())));
            }
            let d = p.max_var_degree();
            if d as f64 >= 2.0 * s + 1.0 {
                return Err(Error::NonIntegrable(format!(
                    "degree {d} in one variable needs s > {}",
                    (d as f64 - 1.0) / 2.0
                )));
            }
            compiled = p.compile();
            Box::new(|x: &[f64]| (compiled.eval(x), 0.0))
        }
        Integrand::Real(g) => Box::new(move |x: &[f64]| (g(x), 0.0)),
        Integrand::Complex(g) => Box::new(move |x: &[f64]| g(x)),
    };
    let value = |n: usize| {
        let sums = grid(n, big_n, s, &*f, opts.exec);
        (sums.re / sums.weight, sums.im / sums.weight, sums.abs / sums.weight)
    };
    let max_n = (MAX_POINTS as f64).powf(1.0 / big_n as f64).floor() as usize;
    let mut n = opts.nodes_per_dim;
    let mut prev = value(n);
    let mut rel_err = f64::INFINITY;
    while 2 * n <= max_n {
        n *= 2;
        let cur = value(n);
        let err = (cur.0 - prev.0).hypot(cur.1 - prev.1);
        let scale = cur.0.hypot(cur.1);
        if err <= opts.rel_tol * scale || err <= ROUNDOFF * cur.2 {
            return Ok(QuadratureValue { re: cur.0, im: cur.1, error_estimate: err, nodes_per_dim: n });
        }
        rel_err = err / scale.max(f64::MIN_POSITIVE);
        prev = cur;
    }
    Err(Error::QuadratureToleranceNotMet(rel_err))
}
