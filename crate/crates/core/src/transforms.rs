//! Generalized Stirling transforms and conversions between power, falling,
//! rising-factorial moment sequences, at the sequence and EGF level.

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::numerics::{
    binomial, factorial, falling, rising, stirling1_unsigned, stirling2, Scalar, TruncatedSeries,
};

/// What the entries of a [`MomentSeq`] are moments of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentKind {
    Power,
    Falling,
    Rising,
    Binomial,
}

type Eval<T> = Arc<dyn Fn(usize) -> T + Send + Sync>;

/// Lazily evaluated moment sequence `s ↦ m_s` for `s ≥ 1` (with `m_0 = 1`),
/// memoized behind a lock.
#[derive(Clone)]
pub struct MomentSeq<T> {
    kind: MomentKind,
    eval: Eval<T>,
    max_order: Option<usize>,
    cache: Arc<Mutex<Vec<Option<T>>>>,
}

impl<T: Scalar> fmt::Debug for MomentSeq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MomentSeq")
            .field("kind", &self.kind)
            .field("max_order", &self.max_order)
            .finish()
    }
}

impl<T: Scalar> MomentSeq<T> {
    pub fn from_fn(kind: MomentKind, max_order: Option<usize>, f: impl Fn(usize) -> T + Send + Sync + 'static) -> Self {
        Self { kind, eval: Arc::new(f), max_order, cache: Arc::new(Mutex::new(Vec::new())) }
    }

    /// Sequence with `values[s-1] = m_s`, defined through `values.len()`.
    pub fn from_values(kind: MomentKind, values: Vec<T>) -> Self {
        let n = values.len();
        let values = Arc::new(values);
        Self::from_fn(kind, Some(n), move |s| values[s - 1].clone())
    }

    pub fn kind(&self) -> MomentKind {
        self.kind
    }

    pub fn max_order(&self) -> Option<usize> {
        self.max_order
    }

    /// `m_s`; `m_0 = 1`.
    pub fn get(&self, s: usize) -> Result<T> {
        if s == 0 {
            return Ok(T::one());
        }
        if let Some(max) = self.max_order {
            if s > max {
                return Err(Error::InvalidInput(format!("moment order {s} beyond defined order {max}")));
            }
        }
        {
            let cache = self.cache.lock().expect("moment cache poisoned");
            if let Some(Some(v)) = cache.get(s) {
                return Ok(v.clone());
            }
        }
        let v = (self.eval)(s);
        let mut cache = self.cache.lock().expect("moment cache poisoned");
        if cache.len() <= s {
            cache.resize(s + 1, None);
        }
        cache[s] = Some(v.clone());
        Ok(v)
    }

    /// `m_1, …, m_order`.
    pub fn values(&self, order: usize) -> Result<Vec<T>> {
        (1..=order).map(|s| self.get(s)).collect()
    }

    /// Same sequence evaluated in another scalar type, e.g. exact to `f64`.
    pub fn convert<U: Scalar>(&self, order: usize) -> Result<MomentSeq<U>> {
        let vals = self.values(order)?;
        Ok(MomentSeq::from_values(self.kind, vals.iter().map(|v| U::from_f64_lossy(v)).collect()))
    }
}

trait Lossy<T> {
    fn from_f64_lossy(v: &T) -> Self;
}

impl<T: Scalar, U: Scalar> Lossy<T> for U {
    fn from_f64_lossy(v: &T) -> Self {
        U::from_rational(&num_rational::BigRational::from_float(v.to_f64()).unwrap_or_default())
    }
}

fn signed<T: Scalar>(v: T, negative: bool) -> T {
    if negative {
        -v
    } else {
        v
    }
}

/// `b_s = Σ_{k=1}^s ρ^k S(s,k) a_k` for `1 ≤ s ≤ order`.
pub fn stirling_transform<T: Scalar>(a: &MomentSeq<T>, rho: &T, order: usize) -> Result<MomentSeq<T>> {
    let av = a.values(order)?;
    let out = (1..=order)
        .map(|s| {
            (1..=s).fold(T::zero(), |acc, k| {
                acc + rho.powu(k as u32) * T::from_bigint(&stirling2(s, k)) * av[k - 1].clone()
            })
        })
        .collect();
    Ok(MomentSeq::from_values(MomentKind::Power, out))
}

/// `a_s = ρ^{-s} Σ_k (-1)^{s-k} c(s,k) b_k`, inverse of [`stirling_transform`].
pub fn inverse_stirling_transform<T: Scalar>(b: &MomentSeq<T>, rho: &T, order: usize) -> Result<MomentSeq<T>> {
    if rho.is_zero() {
        return Err(Error::Domain("inverse Stirling transform needs ρ ≠ 0".into()));
    }
    let bv = b.values(order)?;
    let out = (1..=order)
        .map(|s| {
            let sum = (1..=s).fold(T::zero(), |acc, k| {
                acc + signed(T::from_bigint(&stirling1_unsigned(s, k)), (s - k) % 2 == 1) * bv[k - 1].clone()
            });
            sum / rho.powu(s as u32)
        })
        .collect();
    Ok(MomentSeq::from_values(MomentKind::Power, out))
}

/// Power moments from falling-factorial moments.
pub fn falling_to_power<T: Scalar>(fm: &MomentSeq<T>, order: usize) -> Result<MomentSeq<T>> {
    stirling_transform(fm, &T::one(), order)
}

/// Falling-factorial moments from power moments.
pub fn power_to_falling<T: Scalar>(pm: &MomentSeq<T>, order: usize) -> Result<MomentSeq<T>> {
    let out = inverse_stirling_transform(pm, &T::one(), order)?.values(order)?;
    Ok(MomentSeq::from_values(MomentKind::Falling, out))
}

/// Falling-factorial moments of `X - c` from rising-factorial moments of `X`.
///
/// First `E (X-c)^{rise ℓ} = Σ_i C(ℓ,i) E X^{rise i} (-c)^{rise (ℓ-i)}`, then
/// `x^{fall s} = Σ_ℓ C(s,ℓ) x^{rise ℓ} (-1)^{s-ℓ} (s-1)^{fall (s-ℓ)}`.
pub fn rising_to_falling_shifted<T: Scalar>(rm: &MomentSeq<T>, shift: &T, order: usize) -> Result<MomentSeq<T>> {
    let neg_c = -shift.clone();
    let mut shifted = vec![T::one()];
    for l in 1..=order {
        let v = (0..=l).try_fold(T::zero(), |acc, i| -> Result<T> {
            Ok(acc
                + T::from_bigint(&binomial(l as u64, i as u64)) * rm.get(i)? * rising(&neg_c, (l - i) as u32))
        })?;
        shifted.push(v);
    }
    let out = (1..=order)
        .map(|s| {
            (1..=s).fold(T::zero(), |acc, l| {
                let lah = T::from_bigint(&binomial(s as u64, l as u64))
                    * falling(&T::from_int(s as i64 - 1), (s - l) as u32);
                acc + signed(lah, (s - l) % 2 == 1) * shifted[l].clone()
            })
        })
        .collect();
    Ok(MomentSeq::from_values(MomentKind::Falling, out))
}

/// Exponential generating function `Σ_{s=1}^N a_s z^s / s!` (zero constant term).
pub fn egf<T: Scalar>(a: &MomentSeq<T>, order: usize) -> Result<TruncatedSeries<T>> {
    let mut coeffs = vec![T::zero()];
    for s in 1..=order {
        coeffs.push(a.get(s)? / T::from_bigint(&factorial(s as u64)));
    }
    Ok(TruncatedSeries::new(coeffs))
}

/// `B(z) = A(ρ(e^z - 1))` truncated at order `order`.
pub fn egf_stirling_substitute<T: Scalar>(a: &TruncatedSeries<T>, rho: &T, order: usize) -> Result<TruncatedSeries<T>> {
    let mut inner = vec![T::zero()];
    for m in 1..=order {
        inner.push(rho.clone() / T::from_bigint(&factorial(m as u64)));
    }
    a.truncate(order).compose(&TruncatedSeries::new(inner))
}
