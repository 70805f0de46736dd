use std::sync::{LazyLock, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Scalar;

type Table = RwLock<Vec<Vec<BigInt>>>;

static STIRLING2: LazyLock<Table> = LazyLock::new(|| RwLock::new(vec![vec![BigInt::one()]]));
static STIRLING1: LazyLock<Table> = LazyLock::new(|| RwLock::new(vec![vec![BigInt::one()]]));

/// Grows a triangular table with `T(s,k) = T(s-1,k-1) + w(s-1,k)·T(s-1,k)`.
fn lookup(table: &Table, s: usize, k: usize, weight: fn(usize, usize) -> usize) -> BigInt {
    if k > s {
        return BigInt::zero();
    }
    if let Some(row) = table.read().expect("stirling table poisoned").get(s) {
        return row[k].clone();
    }
    let mut rows = table.write().expect("stirling table poisoned");
    while rows.len() <= s {
        let prev = rows.last().expect("table seeded with row 0");
        let t = prev.len();
        let mut row = vec![BigInt::zero(); t + 1];
        for (kk, slot) in row.iter_mut().enumerate() {
            if kk >= 1 {
                *slot += &prev[kk - 1];
            }
            if kk < t {
                *slot += &prev[kk] * BigInt::from(weight(t - 1, kk));
            }
        }
        rows.push(row);
    }
    rows[s][k].clone()
}

/// Stirling number of the second kind `S(s,k)`.
pub fn stirling2(s: usize, k: usize) -> BigInt {
    lookup(&STIRLING2, s, k, |_, k| k)
}

/// Unsigned Stirling number of the first kind `c(s,k)`.
pub fn stirling1_unsigned(s: usize, k: usize) -> BigInt {
    lookup(&STIRLING1, s, k, |s, _| s)
}

/// Bell number `B_s = Σ_k S(s,k)`.
pub fn bell(s: usize) -> BigInt {
    (0..=s).map(|k| stirling2(s, k)).sum()
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Integer binomial coefficient; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Natural log of a positive big integer, without overflowing `f64`.
pub fn ln_bigint(n: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    let bits = n.bits();
    if bits < 1000 {
        return n.to_f64().unwrap_or(f64::NAN).ln();
    }
    let drop = bits - 64;
    (n >> drop).to_f64().unwrap_or(f64::NAN).ln() + drop as f64 * std::f64::consts::LN_2
}

/// `x (x-1) ... (x-k+1)`.
pub fn falling<T: Scalar>(x: &T, k: u32) -> T {
    (0..k).fold(T::one(), |acc, i| acc * (x.clone() - T::from_int(i as i64)))
}

/// `x (x+1) ... (x+k-1)`.
pub fn rising<T: Scalar>(x: &T, k: u32) -> T {
    (0..k).fold(T::one(), |acc, i| acc * (x.clone() + T::from_int(i as i64)))
}

/// Generalized binomial `∏_{i<m} (a-i) / m!`.
///
/// Factors are paired as `(a-i)/(m-i)` so floating evaluation stays in range
/// when `a` is close to `m`.
pub fn gen_binomial<T: Scalar>(a: &T, m: u64) -> T {
    T::ratio_product((0..m).map(|i| {
        (
            a.clone() - T::from_int(i as i64),
            T::from_int((m - i) as i64),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::rational;
    use crate::Rational;

    fn set_partitions_into(n: usize, k: usize) -> u64 {
        // assign each element a block label with restricted-growth strings
        fn go(i: usize, n: usize, max: usize, k: usize) -> u64 {
            if i == n {
                return u64::from(max == k);
            }
            (0..=max.min(k - 1))
                .map(|b| go(i + 1, n, max.max(b + 1), k))
                .sum()
        }
        if n == 0 {
            return u64::from(k == 0);
        }
        if k == 0 {
            return 0;
        }
        go(0, n, 0, k)
    }

    fn perms_with_cycles(n: usize, k: usize) -> u64 {
        fn permutations(v: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
            if i == v.len() {
                out.push(v.clone());
                return;
            }
            for j in i..v.len() {
                v.swap(i, j);
                permutations(v, i + 1, out);
                v.swap(i, j);
            }
        }
        let mut all = Vec::new();
        permutations(&mut (0..n).collect(), 0, &mut all);
        all.iter()
            .filter(|p| {
                let mut seen = vec![false; n];
                let mut cycles = 0;
                for s in 0..n {
                    if !seen[s] {
                        cycles += 1;
                        let mut x = s;
                        while !seen[x] {
                            seen[x] = true;
                            x = p[x];
                        }
                    }
                }
                cycles == k
            })
            .count() as u64
    }

    #[test]
    fn stirling_tables_match_enumeration() {
        assert_eq!(stirling2(0, 0), BigInt::one());
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        assert_eq!(stirling1_unsigned(4, 2), BigInt::from(11));
        for s in 0..=7 {
            assert_eq!(stirling1_unsigned(s, s), BigInt::one());
            for k in 0..=s + 1 {
                assert_eq!(stirling2(s, k), BigInt::from(set_partitions_into(s, k)), "S({s},{k})");
                assert_eq!(stirling1_unsigned(s, k), BigInt::from(perms_with_cycles(s, k)), "c({s},{k})");
            }
        }
        for s in 1..20 {
            assert_eq!(stirling2(s, 1), BigInt::one());
        }
    }

    #[test]
    fn stirling_orthogonality() {
        for s in 0..=12 {
            for j in 0..=12 {
                let sum: BigInt = (0..=s)
                    .map(|k| {
                        let sign = if (s - k) % 2 == 0 { 1 } else { -1 };
                        stirling1_unsigned(s, k) * stirling2(k, j) * sign
                    })
                    .sum();
                assert_eq!(sum, BigInt::from(i32::from(s == j)));
            }
        }
    }

    #[test]
    fn powers_expand_in_falling_factorials() {
        for x in -5i64..=5 {
            for s in 0..=8u32 {
                let xr = Rational::from_int(x);
                let rhs: Rational = (0..=s as usize)
                    .map(|k| Rational::from_bigint(&stirling2(s as usize, k)) * falling(&xr, k as u32))
                    .sum();
                assert_eq!(rhs, Rational::from_int(x.pow(s)));
            }
        }
    }

    #[test]
    fn generalized_binomials() {
        assert_eq!(gen_binomial(&rational(1, 2), 2), rational(-1, 8));
        assert_eq!(gen_binomial(&rational(3, 2), 2), rational(3, 8));
        assert_eq!(gen_binomial(&rational(7, 3), 0), rational(1, 1));
        for n in 0..12u64 {
            for k in 0..=n + 2 {
                assert_eq!(
                    gen_binomial(&Rational::from_int(n as i64), k),
                    Rational::from_bigint(&binomial(n, k))
                );
            }
        }
        let big = factorial(400);
        let ln400: f64 = (2..=400).map(|i| (i as f64).ln()).sum();
        assert!((ln_bigint(&big) - ln400).abs() < 1e-10 * ln400);
        let approx: f64 = gen_binomial(&1.5f64, 2);
        assert!((approx - 0.375).abs() < 1e-15);
        assert_eq!(bell(5), BigInt::from(52));
    }
}
