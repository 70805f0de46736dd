use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

/// Field of numbers the exact-moment formulas can be evaluated in.
///
/// Implemented for [`BigRational`] (exact) and for `f64`/`f32`.
pub trait Scalar:
    Clone + Num + Neg<Output = Self> + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn from_int(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    fn from_rational(v: &BigRational) -> Self;
    fn to_f64(&self) -> f64;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_int(num) / Self::from_int(den)
    }

    /// `∏ num_i / den_i`. The exact implementation multiplies numerators and
    /// denominators separately and reduces once.
    fn ratio_product<I: IntoIterator<Item = (Self, Self)>>(pairs: I) -> Self {
        pairs
            .into_iter()
            .fold(Self::one(), |acc, (n, d)| acc * (n / d))
    }

    fn powu(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }
}

impl Scalar for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn from_rational(v: &BigRational) -> Self {
        v.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }
    fn ratio_product<I: IntoIterator<Item = (Self, Self)>>(pairs: I) -> Self {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (n, d) in pairs {
            if n.is_zero() {
                return BigRational::zero();
            }
            num *= n.numer() * d.denom();
            den *= n.denom() * d.numer();
        }
        BigRational::new(num, den)
    }
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_int(v: i64) -> Self {
                v as $t
            }
            fn from_bigint(v: &BigInt) -> Self {
                v.to_f64().unwrap_or(f64::INFINITY) as $t
            }
            fn from_rational(v: &BigRational) -> Self {
                ToPrimitive::to_f64(v).unwrap_or(f64::NAN) as $t
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}
float_scalar!(f64);
float_scalar!(f32);

/// Exact rational `num/den`.
pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
