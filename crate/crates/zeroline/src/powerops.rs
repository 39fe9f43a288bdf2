//! Arithmetic shadows of the power-operation machinery: p-adic valuations of
//! the binomial coefficients C(p^i v, p), the nilpotence exponent bound
//! delivered by the torsion-step induction, and extended-power bidegree
//! bookkeeping.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::etalocal::BiDeg;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinomReport {
    pub p: u64,
    pub i: u32,
    pub v: u64,
    /// r = p^i * v, the top argument of the binomial coefficient.
    pub r: BigUint,
    pub binomial: BigUint,
    pub valuation: u64,
    /// valuation >= i - 1
    pub satisfies_bound: bool,
}

/// Exact p-adic valuation of C(p^i v, p) with big integers.
pub fn binom_valuation(p: u64, i: u32, v: u64) -> Result<BinomReport> {
    if !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not prime")));
    }
    if i == 0 {
        return Err(Error::InvalidInput("torsion exponent i must be at least 1".into()));
    }
    if v == 0 || v % p == 0 {
        return Err(Error::InvalidInput(format!("v = {v} is not coprime to p = {p}")));
    }
    let r = BigUint::from(p).pow(i) * BigUint::from(v);
    let binomial = binomial_big(&r, p);
    let mut valuation = 0u64;
    let big_p = BigUint::from(p);
    let mut rest = binomial.clone();
    while (&rest % &big_p).is_zero() && !rest.is_zero() {
        rest /= &big_p;
        valuation += 1;
    }
    Ok(BinomReport {
        p,
        i,
        v,
        r,
        binomial,
        valuation,
        satisfies_bound: valuation >= (i - 1) as u64,
    })
}

fn binomial_big(n: &BigUint, k: u64) -> BigUint {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for j in 0..k {
        num *= n - BigUint::from(j);
        den *= BigUint::from(j + 1);
    }
    num / den
}

/// Hypothesis for the exponent bound: p^i annihilates the element and the
/// ambient degree factors as q = m * s.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorsionHypothesis {
    pub p: u64,
    pub i: u32,
    pub m: u64,
}

impl TorsionHypothesis {
    pub fn new(p: u64, i: u32, m: u64) -> Result<TorsionHypothesis> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if i == 0 || m == 0 {
            return Err(Error::InvalidInput("need i >= 1 and m >= 1".into()));
        }
        Ok(TorsionHypothesis { p, i, m })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub hypothesis: TorsionHypothesis,
    /// N = (1 + m(p+1))^i; x^N = 0 follows by iterating the single
    /// torsion-reduction step i times. An upper bound, not claimed minimal.
    pub exponent: BigUint,
    pub steps: Vec<String>,
}

/// The nilpotence exponent delivered by iterating the step
/// "p^j x^e = 0 implies p^{j-1} x^{e(1 + m(p+1))} = 0" down to j = 0.
pub fn exponent_bound(h: TorsionHypothesis) -> BoundReport {
    let step = BigUint::from(1 + h.m * (h.p as u64 + 1));
    let mut steps = Vec::with_capacity(h.i as usize);
    let mut exponent = BigUint::one();
    for j in (0..h.i).rev() {
        exponent *= &step;
        steps.push(format!(
            "torsion-reduction step: p^{} x^{} = 0 (multiplier 1 + m(p+1) = {})",
            j, exponent, step
        ));
    }
    BoundReport { hypothesis: h, exponent, steps }
}

/// Indices of an extended-power instance: a p-th power construction on a
/// sphere of bidegree (q, w) with offset (s, t).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KPInstance {
    pub p: i64,
    pub q: i64,
    pub w: i64,
    pub s: i64,
    pub t: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KPReport {
    pub source_total: BiDeg,
    pub target_sphere: BiDeg,
    pub map_bidegree: BiDeg,
}

/// Pure integer bookkeeping: the map lives in bidegree p*(q, w) + (s, t) and
/// lands on the sphere of bidegree (pq, pw).
pub fn kp_bidegrees(inst: KPInstance) -> KPReport {
    let total = BiDeg::new(inst.p * inst.q + inst.s, inst.p * inst.w + inst.t);
    KPReport {
        source_total: total,
        target_sphere: BiDeg::new(inst.p * inst.q, inst.p * inst.w),
        map_bidegree: total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_examples() {
        // C(4, 2) = 6 has 2-adic valuation 1 >= 1
        let r = binom_valuation(2, 2, 1).unwrap();
        assert_eq!(r.binomial, BigUint::from(6u32));
        assert_eq!(r.valuation, 1);
        assert!(r.satisfies_bound);
        // C(3, 3) = 1; the i = 1 bound is vacuous
        let r = binom_valuation(3, 1, 1).unwrap();
        assert_eq!(r.binomial, BigUint::from(1u32));
        assert_eq!(r.valuation, 0);
        assert!(r.satisfies_bound);
        // C(8, 2) = 28 has 2-adic valuation 2 >= 2
        let r = binom_valuation(2, 3, 1).unwrap();
        assert_eq!(r.binomial, BigUint::from(28u32));
        assert_eq!(r.valuation, 2);
        assert!(r.satisfies_bound);
        assert!(binom_valuation(2, 1, 4).is_err());
        assert!(binom_valuation(4, 1, 1).is_err());
    }

    #[test]
    fn kummer_bound_sweep() {
        for p in [2u64, 3, 5, 7] {
            for i in 1..=8u32 {
                for v in 1..=20u64 {
                    if v % p == 0 {
                        continue;
                    }
                    let r = binom_valuation(p, i, v).unwrap();
                    assert!(
                        r.satisfies_bound,
                        "p = {p}, i = {i}, v = {v}: valuation {} < {}",
                        r.valuation,
                        i - 1
                    );
                }
            }
        }
    }

    #[test]
    fn exponent_bound_examples() {
        let b = exponent_bound(TorsionHypothesis::new(2, 1, 4).unwrap());
        assert_eq!(b.exponent, BigUint::from(13u32));
        assert_eq!(b.steps.len(), 1);
        let b = exponent_bound(TorsionHypothesis::new(2, 2, 1).unwrap());
        assert_eq!(b.exponent, BigUint::from(16u32));
        for p in [2u64, 3, 5, 7, 11] {
            let b = exponent_bound(TorsionHypothesis::new(p, 1, 1).unwrap());
            assert_eq!(b.exponent, BigUint::from(p + 2));
        }
    }

    #[test]
    fn kp_bookkeeping() {
        let r = kp_bidegrees(KPInstance { p: 2, q: 4, w: 1, s: 1, t: 1 });
        assert_eq!(r.map_bidegree, BiDeg::new(9, 3));
        assert_eq!(r.target_sphere, BiDeg::new(8, 2));
        let r = kp_bidegrees(KPInstance { p: 2, q: 576, w: 320, s: 9, t: 5 });
        assert_eq!(r.map_bidegree, BiDeg::new(1161, 645));
        assert_eq!(r.target_sphere, BiDeg::new(1152, 640));
        let r = kp_bidegrees(KPInstance { p: 5, q: 0, w: 0, s: 3, t: 7 });
        assert_eq!(r.map_bidegree, BiDeg::new(3, 7));
    }
}
