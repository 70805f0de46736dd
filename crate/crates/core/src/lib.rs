//! Mixed Poisson distributions, generalized Stirling transforms, and exact and
//! simulated factorial moments for a catalog of combinatorial models
//! (Stirling permutations, urns, increasing trees, the Chinese restaurant
//! process, Cayley-tree records and cuttings, parking functions, bridges and
//! random mappings).
//!
//! Exact quantities are computed over [`Rational`]; most formulas are generic
//! over [`Scalar`] so the same code also runs in `f64` when only a numerical
//! value at large size is needed.

pub mod error;
pub mod exact;
pub mod harness;
pub mod laws;
pub mod mixed;
pub mod numerics;
pub mod sim;
pub mod transforms;

pub use error::{Error, Result};
pub use numerics::{Real, Scalar};

/// Exact rational in lowest terms.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Truncated power series with exact rational coefficients.
pub type RationalSeries = numerics::TruncatedSeries<Rational>;
/// Mixing law evaluated in double precision.
pub type MixingLaw64 = laws::MixingLaw<f64>;
/// Mixed Poisson law evaluated in double precision.
pub type MixedPoisson64 = mixed::MixedPoisson<f64>;
