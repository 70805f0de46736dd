use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{gen_binomial, Scalar};
use crate::error::{Error, Result};
use crate::Rational;

/// Power series `Σ_{n≤N} c_n z^n` truncated at order `N`.
///
/// Binary operations truncate to the smaller operand order.
#[derive(Clone, PartialEq)]
pub struct TruncatedSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Scalar> fmt::Debug for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter().map(|c| c.to_string())).finish()
    }
}

impl<C: Scalar> TruncatedSeries<C> {
    /// Series from coefficients `c_0..c_N`; an empty vector is the order-0 zero series.
    pub fn new(mut coeffs: Vec<C>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(C::zero());
        }
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn constant(c: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C::one(), order)
    }

    /// `c·z^k`, zero if `k` exceeds the order.
    pub fn monomial(c: C, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `z^n`; zero above the order.
    pub fn coeff(&self, n: usize) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(C::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs: Vec<C> = self.coeffs.iter().take(order + 1).cloned().collect();
        coeffs.resize(order + 1, C::zero());
        Self { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|i| self.coeffs[i].clone() + other.coeffs[i].clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self { coeffs: (0..=n).map(|i| self.coeffs[i].clone() - other.coeffs[i].clone()).collect() }
    }

    pub fn scalar_mul(&self, c: &C) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![C::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self { coeffs: out }
    }

    /// Multiplies by `z^k`, dropping what falls beyond the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for i in 0..=n.saturating_sub(k) {
            if i + k <= n {
                out[i + k] = self.coeffs[i].clone();
            }
        }
        Self { coeffs: out }
    }

    /// Termwise `∫_0^z`: coefficient `m` moves to `m+1` divided by `m+1`.
    pub fn integrate(&self) -> Self {
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for m in 0..n {
            out[m + 1] = self.coeffs[m].clone() / C::from_int(m as i64 + 1);
        }
        Self { coeffs: out }
    }

    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = vec![C::zero(); n + 1];
        for m in 1..=n {
            out[m - 1] = self.coeffs[m].clone() * C::from_int(m as i64);
        }
        Self { coeffs: out }
    }

    /// Multiplicative inverse; requires a non-zero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let a0 = self.coeffs[0].clone();
        if a0.is_zero() {
            return Err(Error::SingularSeries);
        }
        let n = self.order();
        let inv0 = C::one() / a0;
        let mut out: Vec<C> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for m in 1..=n {
            let mut acc = C::zero();
            for i in 1..=m {
                if !self.coeffs[i].is_zero() {
                    acc = acc + self.coeffs[i].clone() * out[m - i].clone();
                }
            }
            out.push(-(acc * inv0.clone()));
        }
        Ok(Self { coeffs: out })
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one(self.order());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `base^{-a}` for a series `base` with non-zero constant term.
    pub fn neg_pow(base: &Self, a: u32) -> Result<Self> {
        Ok(base.inverse()?.pow(a))
    }

    /// `exp(A)` for a series with zero constant term, from `E' = A'E`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("exp needs a series with zero constant term".into()));
        }
        let n = self.order();
        let mut out = vec![C::one()];
        for m in 1..=n {
            let mut acc = C::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc = acc + C::from_int(k as i64) * self.coeffs[k].clone() * out[m - k].clone();
                }
            }
            out.push(acc / C::from_int(m as i64));
        }
        Ok(Self { coeffs: out })
    }

    /// `self(inner(z))` for an `inner` with zero constant term (Horner scheme).
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvalidInput("composition needs an inner series with zero constant term".into()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::zero(n);
        for c in self.coeffs.iter().take(n + 1).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] = acc.coeffs[0].clone() + c.clone();
        }
        Ok(acc)
    }
}

/// The tree function `T(z) = Σ_{n≥1} n^{n-1} z^n / n!` through order `order`.
pub fn tree_series(order: usize) -> TruncatedSeries<Rational> {
    let mut coeffs = vec![Rational::zero()];
    let mut fact = BigInt::one();
    for n in 1..=order {
        fact *= n;
        coeffs.push(Rational::new(BigInt::from(n).pow(n as u32 - 1), fact.clone()));
    }
    TruncatedSeries::new(coeffs)
}

/// `[z^m] (1 - T(z))^{-a}` for integer `a ≥ 1`, in closed form.
///
/// Uses `[z^m] H(T)/(1-T) = [u^m] H(u) e^{mu}` with `H(u) = (1-u)^{1-a}`,
/// giving `Σ_k C(a-2+k, k) m^{m-k}/(m-k)!`. The numerator over `m!` is
/// accumulated by a Horner scheme in integers, so no truncation order applies.
pub fn tree_neg_pow_coeff(m: usize, a: u32) -> Rational {
    assert!(a >= 1, "exponent must be positive");
    let shift = i64::from(a) - 2;
    let mut weights: Vec<BigInt> = Vec::with_capacity(m + 1);
    let mut w = BigInt::one();
    for k in 0..=m {
        if k > 0 {
            w = w * BigInt::from(shift + k as i64) / BigInt::from(k);
        }
        weights.push(w.clone());
    }
    let mm = BigInt::from(m);
    let mut acc = BigInt::zero();
    let mut power = BigInt::one();
    for k in (0..=m).rev() {
        acc = &weights[k] * &power + acc * BigInt::from(m - k);
        power *= &mm;
    }
    Rational::new(acc, super::factorial(m as u64))
}

/// `[z^m] (1-4z)^{-a}` for rational `a > 0`, as `4^m · C(a+m-1, m)`.
pub fn coeff_binom_4z(a_num: i64, a_den: i64, m: u64) -> Result<Rational> {
    if a_den == 0 || (a_num > 0) != (a_den > 0) || a_num == 0 {
        return Err(Error::Domain(format!("coeff_binom_4z needs a > 0, got {a_num}/{a_den}")));
    }
    let a = Rational::new(a_num.into(), a_den.into());
    let upper = a + Rational::from_int(m as i64 - 1);
    Ok(gen_binomial(&upper, m) * Rational::from_bigint(&BigInt::from(4).pow(m as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{factorial, rational};

    fn one_minus_tree(order: usize) -> TruncatedSeries<Rational> {
        TruncatedSeries::one(order).sub(&tree_series(order))
    }

    #[test]
    fn tree_coefficients() {
        let t = tree_series(6);
        assert_eq!(t.coeff(0), rational(0, 1));
        assert_eq!(t.coeff(1), rational(1, 1));
        assert_eq!(t.coeff(3), rational(3, 2));
        assert_eq!(t.coeff(5), rational(625, 120));
    }

    #[test]
    fn inverse_of_one_minus_tree_counts_mappings() {
        let n = 30;
        let f = TruncatedSeries::neg_pow(&one_minus_tree(n), 1).unwrap();
        for m in 0..=n {
            let expected = Rational::new(BigInt::from(m).pow(m as u32), factorial(m as u64));
            assert_eq!(f.coeff(m), expected);
        }
    }

    #[test]
    fn square_inverse_coefficient_three() {
        let f = TruncatedSeries::neg_pow(&one_minus_tree(5), 2).unwrap();
        assert_eq!(f.coeff(3), rational(13, 1));
        assert_eq!(tree_neg_pow_coeff(3, 2), rational(13, 1));
    }

    #[test]
    fn closed_form_matches_series_kernel() {
        let order = 40;
        let base = one_minus_tree(order);
        for a in 1..=5u32 {
            let f = TruncatedSeries::neg_pow(&base, a).unwrap();
            for m in 0..=order {
                assert_eq!(f.coeff(m), tree_neg_pow_coeff(m, a), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn tree_function_fixed_point() {
        let n = 20;
        let t = tree_series(n);
        let rhs = t.exp().unwrap().shift(1);
        assert_eq!(t, rhs);
    }

    #[test]
    fn singular_and_arith() {
        let t = tree_series(4);
        assert_eq!(TruncatedSeries::neg_pow(&t, 1).unwrap_err(), Error::SingularSeries);
        let one = TruncatedSeries::<Rational>::one(3);
        assert_eq!(one.integrate(), TruncatedSeries::monomial(rational(1, 1), 1, 3));
        let mixed = one.add(&tree_series(2));
        assert_eq!(mixed.order(), 2);
    }

    #[test]
    fn binomial_4z_coefficients() {
        assert_eq!(coeff_binom_4z(1, 1, 5).unwrap(), rational(1024, 1));
        assert_eq!(coeff_binom_4z(1, 2, 1).unwrap(), rational(2, 1));
        assert_eq!(coeff_binom_4z(3, 2, 2).unwrap(), rational(30, 1));
        assert!(coeff_binom_4z(-1, 2, 2).is_err());
        // against the series of (1-4z)^{-1/2} squared = (1-4z)^{-1}
        let c: Vec<Rational> = (0..8).map(|m| coeff_binom_4z(1, 2, m).unwrap()).collect();
        let s = TruncatedSeries::new(c);
        let sq = s.mul(&s);
        for m in 0..8 {
            assert_eq!(sq.coeff(m), Rational::from_int(4i64.pow(m as u32)));
        }
    }
}
