//! Exact arithmetic: rationals, polynomials, triangular systems and truncated series.

pub mod gaussian;
pub mod matrix;
pub mod numbers;
pub mod poly;
pub mod residue;
pub mod series;

pub use gaussian::{GaussianRational, PiLaurent};
pub use matrix::{triangular_invert, RationalMatrix};
pub use numbers::{bernoulli, euler_number, eulerian_a, eulerian_b};
pub use poly::RationalPolynomial;
pub use residue::{laurent_inverse_cosh_pow, residue_at_pole, taylor_sinh_ratio};
pub use series::{series_invert, series_mul, Field, Scalar, TruncatedSeries};

/// Exact rational scalar, always canonical with positive denominator.
pub type BigRational = rug::Rational;
