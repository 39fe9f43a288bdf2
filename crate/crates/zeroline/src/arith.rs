//! Exact integer helpers: modular arithmetic, deterministic primality,
//! factorization of 64-bit integers and squarefree decomposition.
//!
//! Everything here is exact; there is no probabilistic failure mode. The
//! Miller-Rabin base set below is a proven witness set for all of `u64`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime, a not divisible by p
    debug_assert!(a % p != 0);
    pow_mod(a % p, p - 2, p)
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_rho(n: u64) -> u64 {
    // n odd composite, not a prime power of a tiny prime
    debug_assert!(n > 3 && n % 2 == 1);
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Full factorization of a u64 (empty map for 0 and 1).
pub fn factor_u64(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out: BTreeMap<u64, u32> = BTreeMap::new();
    if n < 2 {
        return out;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            *out.entry(p).or_insert(0) += 1;
            n /= p;
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            *out.entry(m).or_insert(0) += 1;
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out
}

/// Decompose `n = p^k` if it is a prime power; `None` otherwise.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let f = factor_u64(n);
    if f.len() == 1 {
        let (&p, &k) = f.iter().next().unwrap();
        Some((p, k))
    } else {
        None
    }
}

/// Multiplicative order of `a` modulo `m`, with `group_order` the order of the
/// ambient unit group (fully factored internally).
pub fn multiplicative_order(a: u64, m: u64, group_order: u64) -> u64 {
    debug_assert!(gcd_u64(a % m, m) == 1);
    let mut ord = group_order;
    for (p, k) in factor_u64(group_order) {
        for _ in 0..k {
            if pow_mod(a, ord / p, m) == 1 {
                ord /= p;
            } else {
                break;
            }
        }
    }
    ord
}

/// Signed squarefree data of a nonzero 64-bit integer: sign plus the set of
/// primes with odd exponent.
pub fn squarefree_parts(n: i64) -> Result<(bool, Vec<u64>)> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let neg = n < 0;
    let mag = n.unsigned_abs();
    let primes = factor_u64(mag)
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .collect();
    Ok((neg, primes))
}

pub fn checked_mul_i64(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("coefficient product"))
}

pub fn checked_add_i64(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("coefficient sum"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (2..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
    }

    #[test]
    fn factor_large_semiprime() {
        let n = 1_000_003u64 * 999_983;
        let f = factor_u64(n);
        assert_eq!(f.get(&999_983), Some(&1));
        assert_eq!(f.get(&1_000_003), Some(&1));
    }

    #[test]
    fn squarefree_of_eighteen() {
        let (neg, primes) = squarefree_parts(18).unwrap();
        assert!(!neg);
        assert_eq!(primes, vec![2]);
    }

    #[test]
    fn prime_power_detection() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(27), Some((3, 3)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn orders_mod_seven() {
        assert_eq!(multiplicative_order(3, 7, 6), 6);
        assert_eq!(multiplicative_order(2, 7, 6), 3);
        assert_eq!(multiplicative_order(6, 7, 6), 2);
    }
}
