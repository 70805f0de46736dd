//! Factorial moments driven by the tree function: record subtrees, trees in
//! random mappings, edge cutting, and parking-function increments.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numerics::{factorial, log_gamma, tree_neg_pow_coeff, TruncatedSeries};
use crate::Rational;

/// Truncation order used by [`edgecut_fm`] unless a caller asks for more.
pub const DEFAULT_SERIES_ORDER: usize = 400;
/// Largest moment order the composition sum of the edge-cut moments accepts.
pub const EDGECUT_MAX_ORDER: u32 = 6;

type KernelCache = Mutex<HashMap<(usize, u32), Rational>>;

fn kernel_cache() -> &'static KernelCache {
    static CACHE: OnceLock<KernelCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `[z^m] (1 - T(z))^{-a}`, memoized across threads.
pub fn tree_kernel(m: usize, a: u32) -> Rational {
    if let Some(v) = kernel_cache().lock().expect("kernel cache poisoned").get(&(m, a)) {
        return v.clone();
    }
    let v = tree_neg_pow_coeff(m, a);
    kernel_cache().lock().expect("kernel cache poisoned").insert((m, a), v.clone());
    v
}

/// `j^{j-1} / j!`, the tree-function coefficient of order `j`.
fn tree_coeff(j: u64) -> Rational {
    Rational::new(BigInt::from(j).pow(j as u32 - 1), factorial(j))
}

fn ln_tree_coeff(j: u64) -> f64 {
    (j as f64 - 1.0) * (j as f64).ln() - ln_factorial(j)
}

fn ln_factorial(n: u64) -> f64 {
    log_gamma(n as f64 + 1.0).expect("log-gamma of a positive integer")
}

/// `s! n!/n^n · (j^{j-1}/j!)^s · [z^{n-js}] (1-T)^{-(s+1)}`.
fn tree_moment(n: u64, j: u64, s: u32) -> Rational {
    if s == 0 {
        return Rational::one();
    }
    let used = j * u64::from(s);
    if n < used {
        return Rational::zero();
    }
    let norm = Rational::new(factorial(n), BigInt::from(n).pow(n as u32));
    Rational::from_integer(factorial(u64::from(s)))
        * norm
        * num_traits::pow(tree_coeff(j), s as usize)
        * tree_kernel((n - used) as usize, s + 1)
}

fn tree_moment_f64(n: u64, j: u64, s: u32) -> f64 {
    if s == 0 {
        return 1.0;
    }
    let used = j * u64::from(s);
    if n < used {
        return 0.0;
    }
    let m = n - used;
    let a = i64::from(s) + 1;
    let mf = m as f64;
    // log of C(a-2+k, k) m^{m-k}/(m-k)!; terms are unimodal in k, so the loop
    // stops once they fall 60 e-folds below the peak.
    let mut ln_weight = 0.0;
    let mut terms = Vec::new();
    let mut peak = f64::NEG_INFINITY;
    for k in 0..=m {
        if k > 0 {
            let w = (a - 2 + k as i64) as f64;
            if w <= 0.0 {
                break;
            }
            ln_weight += w.ln() - (k as f64).ln();
        }
        let rest = m - k;
        let ln_pow = if rest == 0 { 0.0 } else { rest as f64 * mf.ln() };
        let t = ln_weight + ln_pow - ln_factorial(rest);
        terms.push(t);
        peak = peak.max(t);
        if t < peak - 60.0 {
            break;
        }
    }
    let kernel = terms.iter().map(|t| (t - peak).exp()).sum::<f64>().ln() + peak;
    let ln_value = ln_factorial(u64::from(s)) + ln_factorial(n) - n as f64 * (n as f64).ln()
        + f64::from(s) * ln_tree_coeff(j)
        + kernel;
    ln_value.exp()
}

fn check_part(n: u64, j: u64, upper: u64, what: &str) -> Result<()> {
    if n == 0 || j == 0 || j > upper {
        return Err(Error::Domain(format!("{what}: need 1 <= j <= {upper}, got n = {n}, j = {j}")));
    }
    Ok(())
}

/// Record subtrees of size `j` in a uniform Cayley tree of size `n`.
pub fn records_fm(n: u64, j: u64, s: u32) -> Result<Rational> {
    check_part(n, j, n, "records")?;
    Ok(tree_moment(n, j, s))
}

/// Double-precision evaluation of [`records_fm`] in log space.
pub fn records_fm_f64(n: u64, j: u64, s: u32) -> Result<f64> {
    check_part(n, j, n, "records")?;
    Ok(tree_moment_f64(n, j, s))
}

/// Trees of size `j` hanging from cyclic points of a uniform map on `n` points.
///
/// The mapping and record-subtree normalizations coincide
/// (`n!/n^n = n!/(n·n^{n-1})`), so this shares its kernel with [`records_fm`].
pub fn mapping_fm(n: u64, j: u64, s: u32) -> Result<Rational> {
    check_part(n, j, n, "mapping")?;
    Ok(tree_moment(n, j, s))
}

pub fn mapping_fm_f64(n: u64, j: u64, s: u32) -> Result<f64> {
    check_part(n, j, n, "mapping")?;
    Ok(tree_moment_f64(n, j, s))
}

/// Coefficient arithmetic shared by the exact and the scaled edge-cut paths.
trait CutField: crate::Scalar {
    /// Coefficient of `w^i` in `T` after the substitution `z = w·scale`.
    fn tree(i: usize) -> Self;
    /// `j^{j-1}/j! · scale^j`.
    fn part(j: u64) -> Self;
}

impl CutField for Rational {
    fn tree(i: usize) -> Self {
        if i == 0 {
            Rational::zero()
        } else {
            tree_coeff(i as u64)
        }
    }
    fn part(j: u64) -> Self {
        tree_coeff(j)
    }
}

/// Scaled by `z = w/e`, which moves the singularity of `T` to `w = 1` and
/// keeps coefficients of order one.
impl CutField for f64 {
    fn tree(i: usize) -> Self {
        if i == 0 {
            0.0
        } else {
            (ln_tree_coeff(i as u64) - i as f64).exp()
        }
    }
    fn part(j: u64) -> Self {
        (ln_tree_coeff(j) - j as f64).exp()
    }
}

/// `[w^n] T · [y^s] exp(Σ_ℓ α_ℓ y^ℓ)` in the coefficient field `C`.
fn cut_coefficient<C: CutField>(n: usize, j: u64, s: u32) -> Result<C> {
    let tree = TruncatedSeries::new((0..=n).map(C::tree).collect());
    let base = TruncatedSeries::one(n).sub(&tree);
    let part = C::part(j);
    let mut alphas: Vec<TruncatedSeries<C>> = Vec::with_capacity(s as usize);
    for ell in 1..=s {
        let inv = TruncatedSeries::neg_pow(&base, ell + 1)?;
        let lead = j as usize * ell as usize;
        let weight = part.powu(ell);
        let mut coeffs = vec![C::zero(); n + 1];
        for q in lead..=n {
            coeffs[q] = weight.clone() * inv.coeff(q - lead) / C::from_int(q as i64);
        }
        alphas.push(TruncatedSeries::new(coeffs));
    }
    // exp(A(y)) in y: B_0 = 1, B_t = (1/t) Σ_ℓ ℓ α_ℓ B_{t-ℓ}.
    let mut blocks = vec![TruncatedSeries::one(n)];
    for t in 1..=s as usize {
        let mut acc = TruncatedSeries::zero(n);
        for ell in 1..=t {
            let term = alphas[ell - 1].mul(&blocks[t - ell]).scalar_mul(&C::from_int(ell as i64));
            acc = acc.add(&term);
        }
        blocks.push(acc.scalar_mul(&(C::one() / C::from_int(t as i64))));
    }
    let b = &blocks[s as usize];
    Ok((1..=n).fold(C::zero(), |acc, i| acc + tree.coeff(i) * b.coeff(n - i)))
}

fn check_edgecut(n: u64, j: u64, s: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("edgecut needs n >= 2, got {n}")));
    }
    check_part(n, j, n - 1, "edgecut")?;
    if s > EDGECUT_MAX_ORDER {
        return Err(Error::Domain(format!("edgecut moments are capped at order {EDGECUT_MAX_ORDER}, got {s}")));
    }
    Ok(())
}

/// Subtrees of size `j` cut off while isolating the root of a uniform Cayley
/// tree of size `n` by uniform edge cuts, with series truncated at `order`.
pub fn edgecut_fm_with_order(n: u64, j: u64, s: u32, order: usize) -> Result<Rational> {
    check_edgecut(n, j, s)?;
    if s == 0 {
        return Ok(Rational::one());
    }
    if n as usize > order {
        return Err(Error::SeriesOrderExceeded { needed: n as usize, order });
    }
    if n < j * u64::from(s) {
        return Ok(Rational::zero());
    }
    let coeff: Rational = cut_coefficient(n as usize, j, s)?;
    let pre = Rational::new(factorial(u64::from(s)) * factorial(n), BigInt::from(n).pow(n as u32 - 1));
    Ok(pre * coeff)
}

pub fn edgecut_fm(n: u64, j: u64, s: u32) -> Result<Rational> {
    edgecut_fm_with_order(n, j, s, DEFAULT_SERIES_ORDER)
}

/// Double-precision edge-cut moment for sizes beyond the exact truncation
/// order; cost is `O(s² n²)`.
pub fn edgecut_fm_f64(n: u64, j: u64, s: u32) -> Result<f64> {
    check_edgecut(n, j, s)?;
    if s == 0 {
        return Ok(1.0);
    }
    if n < j * u64::from(s) {
        return Ok(0.0);
    }
    let coeff: f64 = cut_coefficient(n as usize, j, s)?;
    // n!/n^{n-1} · e^n undoes the w-scaling of the extracted coefficient.
    let ln_pre = ln_factorial(u64::from(s)) + ln_factorial(n) - (n as f64 - 1.0) * (n as f64).ln() + n as f64;
    Ok(coeff * ln_pre.exp())
}

/// Increments of amount `j` of the initial cluster of a uniform parking
/// function of size `n`; equal in law to edge cuts on trees of size `n+1`.
pub fn parking_fm(n: u64, j: u64, s: u32) -> Result<Rational> {
    check_part(n, j, n, "parking")?;
    edgecut_fm(n + 1, j, s)
}

pub fn parking_fm_f64(n: u64, j: u64, s: u32) -> Result<f64> {
    check_part(n, j, n, "parking")?;
    edgecut_fm_f64(n + 1, j, s)
}

/// Checks the series path against the closed Lagrange kernel.
#[cfg(test)]
pub(crate) fn kernel_by_series(m: usize, a: u32) -> Rational {
    let base = TruncatedSeries::one(m).sub(&crate::numerics::tree_series(m));
    TruncatedSeries::neg_pow(&base, a).expect("unit constant term").coeff(m)
}
