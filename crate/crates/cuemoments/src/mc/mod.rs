//! Metropolis-within-Gibbs sampling of the Cauchy eigenvalue density
//!
//! ```text
//! log p(x) = -(s+N) Σ_i log(1 + x_i²) + 2 Σ_{i<j} log|x_i - x_j| + const
//! ```
//!
//! together with block-mean moment estimators, a tensor quadrature oracle for
//! `N ≤ 3` and finite-`N` versus limit tables.
//!
//! Chain `c` draws from ChaCha8 keyed by `seed` on stream `c`, so a
//! [`SampleBatch`] is a pure function of its [`ChainConfig`] regardless of how
//! many threads run the chains, and distinct `(seed, chain)` pairs never share
//! a stream.

pub mod quadrature;
pub mod table;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution};
use serde::{Deserialize, Serialize};

use crate::algebra::sympoly::CompiledPoly;
use crate::cauchy::{MomentSpec, Size, Variant};
use crate::error::{Error, Result};
use crate::symmetric::{v_derivative_parts, xi_poly};
use crate::Execution;

pub use quadrature::{quadrature_expectation, Integrand, QuadratureOptions, QuadratureValue};
pub use table::{asymptotics_table, AsymptoticsRow, AsymptoticsTable, Engine};

/// Target acceptance rate for burn-in adaptation.
pub const TARGET_ACCEPTANCE: f64 = 0.44;
/// Proposals closer than this to another eigenvalue are rejected.
pub const COLLISION_GUARD: f64 = 1e-300;
pub const DEFAULT_BLOCKS: usize = 40;
pub const MIN_BLOCKS: usize = 20;
pub const MAX_BLOCKS: usize = 50;

const HEALTHY_ACCEPTANCE: (f64, f64) = (0.05, 0.95);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub big_n: usize,
    pub s: f64,
    pub chains: usize,
    /// Sweeps discarded while the proposal scale adapts.
    pub burn_in: usize,
    /// Recorded draws per chain.
    pub samples: usize,
    /// Sweeps between recorded draws.
    pub thin: usize,
    pub proposal_scale: f64,
    pub seed: u64,
}

impl ChainConfig {
    pub fn new(big_n: usize, s: f64, seed: u64) -> Self {
        ChainConfig { big_n, s, chains: 4, burn_in: 2_000, samples: 50_000, thin: 1, proposal_scale: 1.0, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.big_n == 0 {
            return bad("N must be at least 1");
        }
        if !(self.s > 0.0 && self.s.is_finite()) {
            return bad("s must be positive");
        }
        if self.chains == 0 || self.samples == 0 || self.thin == 0 {
            return bad("chains, samples and thin must be at least 1");
        }
        if !(self.proposal_scale > 0.0 && self.proposal_scale.is_finite()) {
            return bad("proposal_scale must be positive");
        }
        Ok(())
    }

    /// Generator for chain `chain`: key from `seed`, stream `chain`.
    pub fn chain_rng(&self, chain: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(chain as u64);
        rng
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainDiagnostics {
    pub stream: u64,
    pub acceptance_rate: f64,
    /// Proposal scale after adaptation.
    pub proposal_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub big_n: usize,
    pub s: f64,
    pub seed: u64,
    /// Draws of all chains in chain order, `big_n` values per draw.
    pub draws: Vec<f64>,
    pub acceptance_rate: f64,
    pub chains: Vec<ChainDiagnostics>,
    /// Some chain left the healthy acceptance window.
    pub flagged: bool,
}

impl SampleBatch {
    pub fn len(&self) -> usize {
        self.draws.len() / self.big_n
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }

    pub fn draw(&self, i: usize) -> &[f64] {
        &self.draws[i * self.big_n..(i + 1) * self.big_n]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.draws.chunks_exact(self.big_n)
    }

    /// Values of a scalar statistic along the merged chain.
    pub fn statistic(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        self.iter().map(f).collect()
    }

    /// Effective sample size of a scalar statistic by batch means.
    pub fn effective_sample_size(&self, f: impl Fn(&[f64]) -> f64, blocks: usize) -> Result<f64> {
        Ok(block_summary(&self.statistic(f), blocks)?.ess)
    }
}

/// Log-density terms that change when coordinate `i` moves to `y`.
fn local_log_density(x: &[f64], i: usize, y: f64, weight: f64) -> Option<f64> {
    let mut acc = -weight * y.mul_add(y, 1.0).ln();
    for (j, &xj) in x.iter().enumerate() {
        if j != i {
            let d = (y - xj).abs();
            if d < COLLISION_GUARD {
                return None;
            }
            acc += 2.0 * d.ln();
        }
    }
    Some(acc)
}

fn run_chain(cfg: &ChainConfig, chain: usize) -> (Vec<f64>, ChainDiagnostics) {
    let n = cfg.big_n;
    let mut rng = cfg.chain_rng(chain);
    let step = Cauchy::new(0.0, 1.0).expect("unit Cauchy");
    let weight = cfg.s + n as f64;
    // distinct starting points at the quantiles of a Cauchy law
    let mut x: Vec<f64> = (0..n).map(|i| (std::f64::consts::PI * ((i as f64 + 0.5) / n as f64 - 0.5)).tan()).collect();
    let mut log_scale = cfg.proposal_scale.ln();
    let sweep = |x: &mut Vec<f64>, rng: &mut ChaCha8Rng, scale: f64| -> usize {
        let mut accepted = 0;
        for i in 0..n {
            let y = x[i] + scale * step.sample(rng);
            if !y.is_finite() {
                continue;
            }
            let Some(new) = local_log_density(x, i, y, weight) else { continue };
            let old = local_log_density(x, i, x[i], weight).unwrap_or(f64::NEG_INFINITY);
            let u: f64 = rng.random();
            if u.ln() < new - old {
                x[i] = y;
                accepted += 1;
            }
        }
        accepted
    };
    for k in 0..cfg.burn_in {
        let rate = sweep(&mut x, &mut rng, log_scale.exp()) as f64 / n as f64;
        log_scale += (rate - TARGET_ACCEPTANCE) / ((k + 1) as f64).powf(0.6);
    }
    let scale = log_scale.exp();
    let mut draws = Vec::with_capacity(cfg.samples * n);
    let mut accepted = 0usize;
    for _ in 0..cfg.samples {
        for _ in 0..cfg.thin {
            accepted += sweep(&mut x, &mut rng, scale);
        }
        draws.extend_from_slice(&x);
    }
    let proposals = (cfg.samples * cfg.thin * n) as f64;
    (
        draws,
        ChainDiagnostics { stream: chain as u64, acceptance_rate: accepted as f64 / proposals, proposal_scale: scale },
    )
}

/// Draws from `M_N^{(s)}` by independent chains merged in chain order.
pub fn sample_hp(cfg: &ChainConfig) -> Result<SampleBatch> {
    sample_hp_with(cfg, Execution::default())
}

pub fn sample_hp_with(cfg: &ChainConfig, exec: Execution) -> Result<SampleBatch> {
    cfg.validate()?;
    let run = |c: usize| run_chain(cfg, c);
    #[cfg(feature = "parallel")]
    let results: Vec<(Vec<f64>, ChainDiagnostics)> = if exec == Execution::Parallel {
        use rayon::prelude::*;
        (0..cfg.chains).into_par_iter().map(run).collect()
    } else {
        (0..cfg.chains).map(run).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let results: Vec<(Vec<f64>, ChainDiagnostics)> = {
        let _ = exec;
        (0..cfg.chains).map(run).collect()
    };
    let mut draws = Vec::with_capacity(cfg.chains * cfg.samples * cfg.big_n);
    let mut chains = Vec::with_capacity(cfg.chains);
    for (d, diag) in results {
        draws.extend(d);
        chains.push(diag);
    }
    let acceptance_rate = chains.iter().map(|c| c.acceptance_rate).sum::<f64>() / chains.len() as f64;
    let flagged = chains.iter().any(|c| !(HEALTHY_ACCEPTANCE.0..=HEALTHY_ACCEPTANCE.1).contains(&c.acceptance_rate));
    Ok(SampleBatch { big_n: cfg.big_n, s: cfg.s, seed: cfg.seed, draws, acceptance_rate, chains, flagged })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
    pub ess: f64,
    pub blocks: usize,
}

/// Mean and batch-means standard error over `blocks` contiguous blocks; a
/// trailing remainder shorter than a block is dropped.
pub fn block_summary(values: &[f64], blocks: usize) -> Result<Estimate> {
    if !(MIN_BLOCKS..=MAX_BLOCKS).contains(&blocks) {
        return Err(Error::InvalidSpec(format!("block count {blocks} outside [{MIN_BLOCKS}, {MAX_BLOCKS}]")));
    }
    let size = values.len() / blocks;
    if size < 2 {
        return Err(Error::TooFewSamplesForBlocks { samples: values.len(), blocks });
    }
    let used = &values[..size * blocks];
    let means: Vec<f64> = used.chunks_exact(size).map(|c| c.iter().sum::<f64>() / size as f64).collect();
    let mean = means.iter().sum::<f64>() / blocks as f64;
    let var_means = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (blocks - 1) as f64;
    let stderr = (var_means / blocks as f64).sqrt();
    let n = used.len() as f64;
    let var = used.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let ess = if var_means > 0.0 { (var / (size as f64 * var_means) * n).min(n) } else { n };
    Ok(Estimate { estimate: mean, stderr, ess, blocks })
}

/// Per-draw evaluator of the joint-moment integrand, exponents arbitrary positive reals.
pub struct MomentIntegrand {
    factors: Vec<Factor>,
    scale: f64,
}

enum Factor {
    Z { xi: CompiledPoly, exponent: f64 },
    V { re: CompiledPoly, im: CompiledPoly, exponent: f64 },
}

impl MomentIntegrand {
    pub fn new(spec: &MomentSpec, big_n: usize) -> Result<Self> {
        spec.validate()?;
        let mut factors = Vec::new();
        for (&n, &e) in spec.orders.iter().zip(&spec.exponents) {
            if n == 0 {
                continue;
            }
            factors.push(match spec.variant {
                Variant::Z => Factor::Z { xi: xi_poly(n, big_n).poly.compile(), exponent: e },
                Variant::V => {
                    let (re, im) = v_derivative_parts(n, big_n);
                    Factor::V { re: re.compile(), im: im.compile(), exponent: e }
                }
            });
        }
        Ok(MomentIntegrand { factors, scale: 2f64.powf(-spec.derivative_weight()) })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.factors.iter().fold(self.scale, |acc, f| {
            acc * match f {
                Factor::Z { xi, exponent } => xi.eval(x).abs().powf(*exponent),
                Factor::V { re, im, exponent } => re.eval(x).hypot(im.eval(x)).powf(*exponent),
            }
        })
    }
}

/// Estimate of `finite_joint_moment(spec)` from a batch, with block-mean stderr.
pub fn estimate_joint_moment(batch: &SampleBatch, spec: &MomentSpec) -> Result<Estimate> {
    estimate_joint_moment_blocks(batch, spec, DEFAULT_BLOCKS)
}

pub fn estimate_joint_moment_blocks(batch: &SampleBatch, spec: &MomentSpec, blocks: usize) -> Result<Estimate> {
    match spec.size {
        Size::Finite(n) if n == batch.big_n => {}
        Size::Finite(n) => {
            return Err(Error::InvalidSpec(format!("spec size {n} differs from batch size {}", batch.big_n)))
        }
        Size::Limit => return Err(Error::InvalidSpec("Monte Carlo needs a finite size".into())),
    }
    let f = MomentIntegrand::new(spec, batch.big_n)?;
    block_summary(&batch.statistic(|x| f.eval(x)), blocks)
}
