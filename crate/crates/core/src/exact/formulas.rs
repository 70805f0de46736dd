//! Closed-form factorial moments whose Γ ratios telescope to finite products.
//!
//! Every function here is generic over [`Scalar`]: over `Rational` the result
//! is exact, over `f64` it is a numerically stable evaluation for large sizes.

use crate::numerics::{factorial, falling, gen_binomial, rising, Scalar};
use crate::transforms::{rising_to_falling_shifted, MomentKind, MomentSeq};
use crate::Result;

fn int<T: Scalar>(v: u64) -> T {
    T::from_int(v as i64)
}

fn fact<T: Scalar>(s: u32) -> T {
    T::from_bigint(&factorial(u64::from(s)))
}

/// Blocks of size `k·ell` in a random k-Stirling permutation of order `n`.
pub fn blocks_fm<T: Scalar>(n: u64, k: u32, ell: u64, s: u32) -> T {
    let used = ell * u64::from(s);
    if n < used {
        return T::zero();
    }
    let kk = T::from_int(i64::from(k));
    let inv_k = T::one() / kk.clone();
    let rest = n - used;
    let head = gen_binomial(&(int::<T>(ell) - T::one() - inv_k.clone()), ell - 1)
        / (kk.clone() * int(ell));
    let upper = int::<T>(rest) + T::from_int(i64::from(s) + 1) / kk - T::one();
    fact::<T>(s) * head.powu(s) * gen_binomial(&upper, rest)
        / gen_binomial(&(int::<T>(n) - T::one() + inv_k), n)
}

/// White balls left (in units of `alpha`) when the black balls of a
/// diminishing urn run out; `n` and `m` count white and black groups.
pub fn dimurn_fm<T: Scalar>(n: u64, m: u64, alpha: u64, delta: u64, s: u32) -> T {
    let shift = T::from_ratio((alpha * u64::from(s)) as i64, delta as i64);
    falling(&int::<T>(n), s) / gen_binomial(&(int::<T>(m) + shift), m)
}

/// Descendants of node `j` (itself excluded) in an increasing tree whose
/// family has weight ratio `r`.
pub fn descendants_fm<T: Scalar>(n: u64, j: u64, s: u32, r: &T) -> T {
    let ss = T::from_int(i64::from(s));
    falling(&int::<T>(n - j), s) * gen_binomial(&(ss.clone() + r.clone()), u64::from(s))
        / gen_binomial(&(int::<T>(j) - T::one() + r.clone() + ss), u64::from(s))
}

/// Outdegree of node `j ≥ 2` in a generalized plane recursive tree.
pub fn nodedeg_fm<T: Scalar>(n: u64, j: u64, s: u32, alpha: &T) -> T {
    let c = T::one() / (alpha.clone() + T::one());
    let sum = (0..=s).fold(T::zero(), |acc, k| {
        let shift = T::from_int(i64::from(s) - 1 - i64::from(k)) * c.clone();
        let ratio = T::ratio_product((j..n).map(|i| (int::<T>(i) + shift.clone(), int::<T>(i) - c.clone())));
        let term = T::from_bigint(&crate::numerics::binomial(u64::from(s), u64::from(k))) * ratio;
        if k % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    rising(alpha, s) * sum
}

/// Per-branch weight `C(k-1-c, k-1) / ((alpha+1) k)` with `c = 1/(alpha+1)`.
pub fn branch_weight<T: Scalar>(k: u64, alpha: &T) -> T {
    let a1 = alpha.clone() + T::one();
    let c = T::one() / a1.clone();
    gen_binomial(&(int::<T>(k) - T::one() - c), k - 1) / (a1 * int(k))
}

/// Size-`k` branches attached to node `j` in a generalized plane recursive tree.
pub fn branches_fm<T: Scalar>(n: u64, j: u64, k: u64, s: u32, alpha: &T) -> T {
    let used = j + k * u64::from(s);
    if n < used {
        return T::zero();
    }
    let c = T::one() / (alpha.clone() + T::one());
    let rest = n - used;
    let upper = int::<T>(n - k * u64::from(s)) - T::one() + T::from_int(i64::from(s) - 1) * c.clone();
    branch_weight(k, alpha).powu(s)
        * rising(alpha, s)
        * gen_binomial(&(int::<T>(j) - T::one() - c.clone()), j - 1)
        * gen_binomial(&upper, rest)
        / (gen_binomial(&int::<T>(n - 1), j - 1) * gen_binomial(&(int::<T>(n) - T::one() - c), n - 1))
}

/// `(alpha, beta)` of the tree growth process equivalent to a restaurant
/// with discount `a` and strength `theta`.
pub fn crp_params<T: Scalar>(a: &T, theta: &T) -> (T, T) {
    (T::one() / a.clone() - T::one(), theta.clone() / a.clone())
}

/// Tables of size `j` after `n` customers of a Chinese restaurant process,
/// in tree-growth parameters (`beta > 0` is checked by the caller).
pub fn crp_fm<T: Scalar>(n: u64, j: u64, s: u32, alpha: &T, beta: &T) -> T {
    let used = j * u64::from(s);
    if n < used {
        return T::zero();
    }
    let c = T::one() / (alpha.clone() + T::one());
    let ss = T::from_int(i64::from(s));
    let rest = n - used;
    let upper = int::<T>(rest) - T::one() + (beta.clone() + ss) * c.clone();
    branch_weight(j, alpha).powu(s) * fact::<T>(s)
        / gen_binomial(&(beta.clone() * c + int(n) - T::one()), n)
        * gen_binomial(&(beta.clone() - T::one() + T::from_int(i64::from(s))), u64::from(s))
        * gen_binomial(&upper, rest)
}

/// Rising moment of `W/alpha` for the balanced triangular urn
/// `((alpha, beta), (0, alpha+beta))` after `n` draws.
pub fn triangular_rising_fm<T: Scalar>(n: u64, w0: u64, b0: u64, alpha: u64, beta: u64, s: u32) -> T {
    let gamma = alpha + beta;
    let t0 = w0 + b0;
    let lift = alpha * u64::from(s);
    T::ratio_product((0..n).map(|i| (int::<T>(t0 + lift + i * gamma), int::<T>(t0 + i * gamma))))
        * rising(&T::from_ratio(w0 as i64, alpha as i64), s)
}

/// Falling moments of the white-ball gain `(W - w0)/alpha` up to order `smax`.
pub fn triangular_fm_seq<T: Scalar>(n: u64, w0: u64, b0: u64, alpha: u64, beta: u64, smax: u32) -> Result<Vec<T>> {
    let rm: Vec<T> = (1..=smax).map(|s| triangular_rising_fm(n, w0, b0, alpha, beta, s)).collect();
    let seq = MomentSeq::from_values(MomentKind::Rising, rm);
    let shift = T::from_ratio(w0 as i64, alpha as i64);
    let fm = rising_to_falling_shifted(&seq, &shift, smax as usize)?;
    (0..=smax as usize).map(|s| fm.get(s)).collect()
}

/// Falling moment of order `s` of `(W - w0)/alpha`.
pub fn triangular_fm<T: Scalar>(n: u64, w0: u64, b0: u64, alpha: u64, beta: u64, s: u32) -> Result<T> {
    Ok(triangular_fm_seq(n, w0, b0, alpha, beta, s)?.pop().unwrap_or_else(T::one))
}

/// Visits after excursions of length `2j` in a uniform bridge of length `2n`.
pub fn bridge_fm<T: Scalar>(n: u64, j: u64, s: u32) -> T {
    let used = j * u64::from(s);
    if n < used {
        return T::zero();
    }
    let half = T::from_ratio(1, 2);
    let rest = n - used;
    // D_j / 4^j, kept as one bounded factor.
    let visit = gen_binomial(&(int::<T>(j) - T::from_ratio(3, 2)), j - 1) / (T::from_int(4) * int(j));
    let upper = T::from_ratio(i64::from(s) + 1, 2) + int(rest) - T::one();
    fact::<T>(s) * (T::from_int(2) * visit).powu(s) * gen_binomial(&upper, rest)
        / gen_binomial(&(int::<T>(n) - half), n)
}

/// Asymptotic main term of the factorial moments of inversions induced by
/// node `j` in a labelled tree family with variance constant `kappa`.
pub fn inversions_fm(n: u64, j: u64, s: u32, kappa: f64) -> f64 {
    if s == 0 {
        return 1.0;
    }
    let half = f64::from(s) / 2.0;
    let g = libm::tgamma(half + 1.0);
    g * (2.0 / kappa).powf(half) * falling(&((n - j) as f64), s) / (n as f64).powf(half)
}
