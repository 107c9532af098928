//! Exact and Monte Carlo joint moments of characteristic polynomials of
//! Haar unitary matrices and their derivatives.
//!
//! The exact engines work over the rationals: expectations against the Cauchy
//! eigenvalue measure are rational functions of `s`, Hankel determinants of
//! confluent hypergeometric functions are exponential polynomials in `t`, and
//! the Painlevé residuals built from them vanish identically.

pub mod algebra;
pub mod cauchy;
pub mod error;
pub mod hankel;
pub mod mc;
pub mod painleve;
pub mod symmetric;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How data-parallel loops run. `Parallel` falls back to sequential when the
/// `parallel` feature is disabled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}
