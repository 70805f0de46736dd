//! Exact combinatorial functions, real special functions, truncated power
//! series, quadrature and compensated summation.

mod combin;
mod quad;
mod scalar;
mod series;
mod special;
mod sum;

pub use combin::{
    bell, binomial, factorial, falling, gen_binomial, ln_bigint, rising, stirling1_unsigned, stirling2,
};
pub use quad::{integrate, integrate_to_infinity, Quadrature};
pub use scalar::{rational, Scalar};
pub use series::{coeff_binom_4z, tree_neg_pow_coeff, tree_series, TruncatedSeries};
pub use special::{erfc, erfcx, exp_square, gamma, gamma_ratio, ln_gamma_ratio, log_gamma, upper_incomplete_gamma, Real};
pub use sum::Compensated;
