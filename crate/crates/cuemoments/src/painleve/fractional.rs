//! Fractional absolute moments of `q_1(s)` from its characteristic function:
//!
//! ```text
//! E|q_1|^p = C_p ∫_0^∞ (1 - φ_s(t)) t^{-p-1} dt,   0 < p < 2.
//! ```

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::algebra::rational::to_f64;
use crate::error::{Error, Result};

use super::special::{barnes_g_int, fractional_constant};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Gauss–Legendre nodes per panel; the error estimate reruns with twice as many.
    pub nodes: usize,
    /// Panel width on `[1, upper]`.
    pub panel: f64,
    /// Where `φ_s` is negligible.
    pub upper: f64,
    /// Below this point the exact power series is integrated termwise.
    pub series_cut: f64,
    pub series_order: usize,
    pub tol: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { nodes: 24, panel: 2.0, upper: 400.0, series_cut: 0.5, series_order: 48, tol: 1e-9 }
    }
}

/// `Σ_m x^m / (m!(m+ν)!)`, so that `I_ν(2√x) = x^{ν/2}·g_ν(x)`.
fn bessel_core(nu: usize, x: f64) -> f64 {
    let mut term = 1.0;
    for k in 1..=nu {
        term /= k as f64;
    }
    let mut sum = term;
    for m in 1..10_000 {
        term *= x / (m as f64 * (m + nu) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

#[allow(clippy::needless_range_loop)]
fn det_f64(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).unwrap();
        if a[piv][c] == 0.0 {
            return 0.0;
        }
        if piv != c {
            a.swap(piv, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// `φ_s(t)` in floating point for `t ≥ 0`.
pub fn phi_f64(s: usize, t: f64) -> f64 {
    let g = |n: usize| to_f64(&crate::algebra::rational::Rational::from_integer(barnes_g_int(n)));
    let mut c = g(2 * s + 1) / (g(s + 1) * g(s + 1));
    if (s * (s - 1) / 2) % 2 == 1 {
        c = -c;
    }
    let x = 2.0 * t;
    let m: Vec<Vec<f64>> = (0..s).map(|j| (0..s).map(|k| bessel_core(j + k + 1, x)).collect()).collect();
    c * (-t).exp() * det_f64(m)
}

fn panels(rule: &GaussLegendre, a: f64, b: f64, width: f64, f: &impl Fn(f64) -> f64) -> f64 {
    let n = ((b - a) / width).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    (0..n).map(|i| rule.integrate(a + i as f64 * h, a + (i + 1) as f64 * h, f)).sum()
}

/// `E|q_1(s)|^p` for `0 < p < 2`.
///
/// `[0, c]` is integrated termwise from the exact series of `1 - φ_s`,
/// `[c, 1]` directly, and `[1, ∞)` as `1/p - ∫_1^U φ_s t^{-p-1}`.
pub fn fractional_moment_q1(p: f64, s: usize, cfg: &QuadConfig) -> Result<f64> {
    let cp = fractional_constant(p)?;
    if s == 0 {
        return Err(Error::Unsupported("s must be a positive integer".into()));
    }
    let series = super::phi_series(s, cfg.series_order)?;
    let c = cfg.series_cut;
    let mut head = 0.0;
    for n in 1..=cfg.series_order {
        let a = to_f64(&series.coeff(n));
        if a != 0.0 {
            head -= a * c.powf(n as f64 - p) / (n as f64 - p);
        }
    }
    let run = |nodes: usize| -> f64 {
        let rule = GaussLegendre::new(NonZeroUsize::new(nodes).unwrap());
        let mid = rule.integrate(c, 1.0, |t| (1.0 - phi_f64(s, t)) * t.powf(-p - 1.0));
        let tail = panels(&rule, 1.0, cfg.upper, cfg.panel, &|t| phi_f64(s, t) * t.powf(-p - 1.0));
        mid + 1.0 / p - tail
    };
    let coarse = run(cfg.nodes);
    let fine = run(2 * cfg.nodes);
    let err = cp * (fine - coarse).abs();
    if err.is_nan() || err > cfg.tol {
        return Err(Error::QuadratureToleranceNotMet(err));
    }
    Ok(cp * (head + fine))
}

/// `∫_0^∞ (1 - cos(ty)) t^{-p-1} dt` evaluated numerically, the reciprocal of `C_p` at `y = 1`.
///
/// `[0, 1]` uses the cosine series, `[1, 2πK]` Gauss–Legendre panels, and the
/// remainder the asymptotic expansion of `∫_A^∞ cos(t) t^{-a} dt` at `A = 2πK`.
pub fn fractional_identity_integral(p: f64, y: f64) -> f64 {
    // substitute u = ty: y^p ∫ (1 - cos u) u^{-p-1} du
    let mut head = 0.0;
    let mut fact = 1.0;
    for k in 1..30 {
        fact *= (2 * k - 1) as f64 * (2 * k) as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        head += sign / fact / (2.0 * k as f64 - p);
    }
    let a = 2.0 * std::f64::consts::PI * 400.0;
    let rule = GaussLegendre::new(NonZeroUsize::new(24).unwrap());
    let mid = panels(&rule, 1.0, a, std::f64::consts::FRAC_PI_2, &|u| (1.0 - u.cos()) * u.powf(-p - 1.0));
    let e = p + 1.0;
    let cos_tail = e * a.powf(-e - 1.0) - e * (e + 1.0) * (e + 2.0) * a.powf(-e - 3.0);
    let tail = a.powf(-p) / p - cos_tail;
    y.powf(p) * (head + mid + tail)
}
