//! Exact arithmetic: rationals, univariate polynomials and rational
//! functions, sparse multivariate polynomials, truncated power series and
//! `e^{-ct}·p(t)` functions. Nothing here uses floating point except the
//! explicit `*_f64` conversions.

pub mod exppoly;
pub mod poly;
pub mod ratfun;
pub mod rational;
pub mod series;
pub mod sympoly;

pub use exppoly::ExpPolyFunction;
pub use poly::Poly;
pub use ratfun::RationalFunction;
pub use rational::{rat, ratio, Rational};
pub use series::{series_logderiv, PowerSeries};
pub use sympoly::{SymPoly, MAX_ARITY};
