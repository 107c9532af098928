//! Finite-`N` normalized moments next to their limit.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::rational::{from_f64, to_f64, Rational};
use crate::algebra::RationalFunction;
use crate::cauchy::{finite_joint_moment, limiting_moment, limiting_v_moment, MomentSpec, Size, Variant};
use crate::error::{Error, Result};

use super::{estimate_joint_moment, sample_hp, ChainConfig};

#[derive(Clone, Debug, PartialEq)]
pub enum Engine {
    Exact,
    /// Chain settings; `big_n` and `s` are overridden per row.
    MonteCarlo(ChainConfig),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsRow {
    /// `None` for the limit.
    pub big_n: Option<usize>,
    pub value: f64,
    pub stderr: Option<f64>,
    /// Exact value as a function of `s`, normalized like `value`.
    pub exact: Option<RationalFunction>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticsTable {
    pub spec: MomentSpec,
    pub s: f64,
    pub rows: Vec<AsymptoticsRow>,
    /// Absent when some exponent is not an even integer.
    pub limit: Option<AsymptoticsRow>,
}

/// Rows `2^{-Σ2h_j n_j} E_N[∏|Ξ_{n_j}/N^{n_j}|^{2h_j}]` for each `N`, and the limit row.
pub fn asymptotics_table(spec: &MomentSpec, s: f64, sizes: &[usize], engine: &Engine) -> Result<AsymptoticsTable> {
    spec.validate()?;
    let weight = spec.derivative_weight();
    let s_exact = from_f64(s).ok_or_else(|| Error::InvalidSpec(format!("s = {s} is not finite")))?;
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let sized = MomentSpec { size: Size::Finite(n), ..spec.clone() };
        let norm = (n as f64).powf(-weight);
        let row = match engine {
            Engine::Exact => {
                let f = finite_joint_moment(&sized)?;
                let scaled = f.scale(&Rational::new(BigInt::from(1), BigInt::from(n).pow(weight as u32)));
                let value = to_f64(&scaled.eval(&s_exact)?);
                AsymptoticsRow { big_n: Some(n), value, stderr: None, exact: Some(scaled) }
            }
            Engine::MonteCarlo(cfg) => {
                let batch = sample_hp(&ChainConfig { big_n: n, s, ..cfg.clone() })?;
                let est = estimate_joint_moment(&batch, &sized)?;
                AsymptoticsRow {
                    big_n: Some(n),
                    value: est.estimate * norm,
                    stderr: Some(est.stderr * norm),
                    exact: None,
                }
            }
        };
        rows.push(row);
    }
    let limit = match spec.even_pairs() {
        Ok(pairs) => {
            let orders: Vec<usize> = pairs.iter().map(|p| p.0).collect();
            let exps: Vec<u32> = pairs.iter().map(|p| p.1).collect();
            let f = match spec.variant {
                Variant::Z => limiting_moment(&orders, &exps)?,
                Variant::V => limiting_v_moment(&orders, &exps)?,
            };
            let f = f.scale(&Rational::new(BigInt::from(1), BigInt::from(2).pow(weight as u32)));
            let value = to_f64(&f.eval(&s_exact)?);
            Some(AsymptoticsRow { big_n: None, value, stderr: None, exact: Some(f) })
        }
        Err(Error::UnsupportedOddExponent(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(AsymptoticsTable { spec: spec.clone(), s, rows, limit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::ratio;

    #[test]
    fn first_derivative_rows() {
        let spec = MomentSpec::new(vec![1], vec![2.0], Variant::Z, Size::Limit).unwrap();
        let t = asymptotics_table(&spec, 2.0, &[1, 2, 3], &Engine::Exact).unwrap();
        let lim = t.limit.unwrap();
        assert_eq!(lim.exact.unwrap().eval(&Rational::from_integer(2.into())).unwrap(), ratio(1, 60));
        let two = t.rows[1].exact.clone().unwrap();
        assert_eq!(two.eval(&Rational::from_integer(2.into())).unwrap(), ratio(1, 20));
        assert!((t.rows[1].value - 0.05).abs() < 1e-15);
    }

    #[test]
    fn real_exponent_has_no_limit_row() {
        let spec = MomentSpec::new(vec![1], vec![1.0], Variant::Z, Size::Limit).unwrap();
        let cfg = ChainConfig { samples: 2_000, chains: 2, ..ChainConfig::new(1, 2.0, 5) };
        let t = asymptotics_table(&spec, 2.0, &[1], &Engine::MonteCarlo(cfg)).unwrap();
        assert!(t.limit.is_none());
        assert!(t.rows[0].stderr.unwrap() > 0.0);
    }
}
