//! Arithmetic in F_q for odd prime powers q.
//!
//! Elements are encoded as indices in `0..q`: the base-p digits of the index
//! are the coefficients of the element on the power basis of
//! F_p[x]/(modulus). The modulus is the lexicographically least monic
//! irreducible polynomial of the right degree, so every representation here
//! is a deterministic function of q alone.

use crate::arith::{factor_u64, inv_mod, is_prime, mul_mod, multiplicative_order, pow_mod, prime_power};
use crate::error::{Error, Result};

/// Largest supported field size; keeps discrete-log tables and the
/// irreducibility search cheap.
pub const MAX_Q: u64 = 1 << 16;

#[derive(Debug)]
pub struct FqParams {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Monic irreducible modulus, coefficients low to high, length k+1.
    /// Empty for k = 1 (plain prime field).
    pub modulus: Vec<u64>,
    /// Least primitive element (index encoding).
    pub generator: u64,
    /// Least quadratic nonresidue (index encoding).
    pub nonresidue: u64,
    /// Index of -1.
    pub minus_one: u64,
    /// dlog[e] = n with generator^n = e, for e in 1..q (dlog[0] unused).
    dlog: Vec<u32>,
}

impl PartialEq for FqParams {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}
impl Eq for FqParams {}

impl std::hash::Hash for FqParams {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.q.hash(state);
    }
}

impl PartialOrd for FqParams {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqParams {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.q.cmp(&other.q)
    }
}

fn digits(mut e: u64, p: u64, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(e % p);
        e /= p;
    }
    out
}

fn undigits(coeffs: &[u64], p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = acc * p + c;
    }
    acc
}

/// Polynomial multiplication mod (modulus, p). Coefficient slices low→high.
fn poly_mul_mod(a: &[u64], b: &[u64], modulus: &[u64], p: u64) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    // reduce by the monic modulus
    for i in (k..prod.len()).rev() {
        let c = prod[i];
        if c == 0 {
            continue;
        }
        prod[i] = 0;
        for j in 0..k {
            let sub = mul_mod(c, modulus[j], p);
            prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
        }
    }
    prod.truncate(k);
    while prod.len() < k {
        prod.push(0);
    }
    prod
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    // trial division by all monic polynomials of degree 1..=deg/2
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut divisor = digits(idx, p, d as u32);
            divisor.push(1); // monic
            if poly_rem_is_zero(poly, &divisor, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(a: &[u64], b: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while rem.len() > db {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - db;
            for (j, &bj) in b.iter().enumerate() {
                let sub = mul_mod(lead, bj, p);
                rem[shift + j] = (rem[shift + j] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

impl FqParams {
    pub fn new(q: u64) -> Result<FqParams> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidInput(format!("{q} is not a prime power")))?;
        if p == 2 {
            return Err(Error::Unsupported(format!(
                "F{q} has characteristic two"
            )));
        }
        if q > MAX_Q {
            return Err(Error::Unsupported(format!(
                "F{q} exceeds the supported field size {MAX_Q}"
            )));
        }
        debug_assert!(is_prime(p));
        let modulus = if k == 1 {
            Vec::new()
        } else {
            // least monic irreducible of degree k, by integer encoding of the
            // non-leading coefficients
            let mut found = None;
            for idx in 0..q {
                let mut poly = digits(idx, p, k);
                poly.push(1);
                if is_irreducible(&poly, p) {
                    found = Some(poly);
                    break;
                }
            }
            found.ok_or_else(|| Error::Internal(format!("no irreducible modulus for F{q}")))?
        };

        let mut params = FqParams {
            p,
            k,
            q,
            modulus,
            generator: 0,
            nonresidue: 0,
            minus_one: p - 1,
            dlog: Vec::new(),
        };

        let group = q - 1;
        let group_factors: Vec<u64> = factor_u64(group).into_keys().collect();
        'search: for e in 2..q {
            for &f in &group_factors {
                if params.pow(e, group / f) == 1 {
                    continue 'search;
                }
            }
            params.generator = e;
            break;
        }
        debug_assert!(params.generator != 0);

        for e in 1..q {
            if !params.is_square(e) {
                params.nonresidue = e;
                break;
            }
        }
        debug_assert!(params.nonresidue != 0);

        let mut dlog = vec![0u32; q as usize];
        let mut acc = 1u64;
        for n in 0..group {
            dlog[acc as usize] = n as u32;
            acc = params.mul(acc, params.generator);
        }
        params.dlog = dlog;
        Ok(params)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let da = digits(a, self.p, self.k);
        let db = digits(b, self.p, self.k);
        let sum: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        undigits(&sum, self.p)
    }

    pub fn neg(&self, a: u64) -> u64 {
        if self.k == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let da = digits(a, self.p, self.k);
        let neg: Vec<u64> = da.iter().map(|&x| (self.p - x) % self.p).collect();
        undigits(&neg, self.p)
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.k == 1 {
            return mul_mod(a, b, self.p);
        }
        let da = digits(a, self.p, self.k);
        let db = digits(b, self.p, self.k);
        undigits(&poly_mul_mod(&da, &db, &self.modulus, self.p), self.p)
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        if self.k == 1 {
            return pow_mod(base, exp, self.p);
        }
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInput);
        }
        if self.k == 1 {
            return Ok(inv_mod(a, self.p));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn is_square(&self, a: u64) -> bool {
        debug_assert!(a != 0);
        self.pow(a, (self.q - 1) / 2) == 1
    }

    /// Some x with x^2 = a, if a is a square (brute scan; q is small).
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        (1..self.q).find(|&x| self.mul(x, x) == a)
    }

    /// Discrete log with respect to the fixed generator.
    pub fn dlog(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(self.dlog[a as usize] as u64)
    }

    pub fn elt_order(&self, a: u64) -> Result<u64> {
        let d = self.dlog(a)?;
        let g = num_integer::gcd(d, self.q - 1);
        Ok((self.q - 1) / g)
    }

    /// Reduce an integer literal into the field. Values in `0..q` are read as
    /// base-p digit encodings; negative literals mean the negation of their
    /// absolute value.
    pub fn from_int(&self, v: i64) -> Result<u64> {
        let mag = v.unsigned_abs();
        let enc = if self.k == 1 {
            mag % self.p
        } else {
            if mag >= self.q {
                return Err(Error::InvalidInput(format!(
                    "element literal {v} out of range for F{}",
                    self.q
                )));
            }
            mag
        };
        Ok(if v < 0 { self.neg(enc) } else { enc })
    }
}

/// Order of an element of F_p^* given as a residue, p prime.
pub fn residue_order(a: u64, p: u64) -> u64 {
    multiplicative_order(a % p, p, p - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f9_modulus_is_x2_plus_1() {
        let f9 = FqParams::new(9).unwrap();
        assert_eq!(f9.modulus, vec![1, 0, 1]); // x^2 + 1
        // x * x = -1 = 2 (constant)
        let x = 3u64; // digits (0, 1)
        assert_eq!(f9.mul(x, x), 2);
    }

    #[test]
    fn f7_tables() {
        let f7 = FqParams::new(7).unwrap();
        assert_eq!(f7.generator, 3);
        assert_eq!(f7.nonresidue, 3);
        let squares: Vec<u64> = (1..7).filter(|&a| f7.is_square(a)).collect();
        assert_eq!(squares, vec![1, 2, 4]);
    }

    #[test]
    fn rejects_char_two_and_non_prime_powers() {
        assert!(FqParams::new(8).is_err());
        assert!(FqParams::new(12).is_err());
        assert!(FqParams::new(2).is_err());
    }

    #[test]
    fn f27_field_axioms_spotcheck() {
        let f = FqParams::new(27).unwrap();
        for a in 1..27u64 {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1, "a = {a}");
        }
        // distributivity on a few triples
        for (a, b, c) in [(5u64, 7u64, 11u64), (13, 2, 25), (26, 26, 3)] {
            assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        }
    }
}
