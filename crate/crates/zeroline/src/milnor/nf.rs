//! Field-specific normal forms for Milnor K-theory elements.
//!
//! The coordinate tables are exact where the groups are classified:
//!   Q:   degree 0 an integer, degree 1 sign and prime exponents, degree 2
//!        a 2-adic bit plus tame components in F_p^*, degree >= 3 a single
//!        real sign bit.
//!   F_q: degree 0 an integer, degree 1 a residue mod q-1, degree >= 2 zero.
//!   R:   sign data exactly; positive entries span uniquely divisible
//!        summands, carried as a formal residue that is either certified
//!        zero or undecided.
//!   C:   degree 1 is decided by the exact value; higher degrees carry the
//!        divisible residue with torsion classes certified zero.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::arith::{mul_mod, pow_mod};
use crate::error::{Error, Result};
use crate::field::finite::residue_order;
use crate::field::{
    hilbert_symbol_classes, square_class, FieldElt, FieldKind, FieldSpec, Place,
};
use crate::verdict::TorsionInfo;

use super::{MilnorElt, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Residue {
    Zero,
    /// Degree-one value; zero iff equal to one.
    Value(BigRational),
    /// Uncertified formal combination of positive-entry symbols.
    Formal(Vec<(Vec<BigRational>, i64)>),
}

impl Residue {
    pub fn certified_zero(&self) -> Option<bool> {
        match self {
            Residue::Zero => Some(true),
            Residue::Value(v) => Some(v.is_one()),
            Residue::Formal(_) => None,
        }
    }
}

/// Integral normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorNf {
    pub field: FieldSpec,
    pub degree: u32,
    pub data: NfData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NfData {
    Int(i64),
    QUnits { neg: bool, exps: BTreeMap<u64, i64> },
    QTwo { wild2: bool, tame: BTreeMap<u64, u64> },
    QHigh { real: bool },
    FqUnits { dlog: u64 },
    TrivialGroup,
    Real { neg: bool, residue: Residue },
    Complex { residue: Residue },
}

impl MilnorNf {
    pub fn is_zero(&self) -> Result<bool> {
        Ok(match &self.data {
            NfData::Int(c) => *c == 0,
            NfData::QUnits { neg, exps } => !neg && exps.is_empty(),
            NfData::QTwo { wild2, tame } => !wild2 && tame.is_empty(),
            NfData::QHigh { real } => !real,
            NfData::FqUnits { dlog } => *dlog == 0,
            NfData::TrivialGroup => true,
            NfData::Real { neg, residue } => {
                if *neg {
                    false
                } else {
                    residue.certified_zero().ok_or_else(unknown_residue)?
                }
            }
            NfData::Complex { residue } => {
                residue.certified_zero().ok_or_else(unknown_residue)?
            }
        })
    }

    pub fn torsion(&self) -> Result<TorsionInfo> {
        Ok(match &self.data {
            NfData::Int(c) => {
                if *c == 0 {
                    TorsionInfo::of_order(1)
                } else {
                    TorsionInfo::not_torsion()
                }
            }
            NfData::QUnits { neg, exps } => {
                if !exps.is_empty() {
                    TorsionInfo::not_torsion()
                } else if *neg {
                    TorsionInfo::of_order(2)
                } else {
                    TorsionInfo::of_order(1)
                }
            }
            NfData::QTwo { wild2, tame } => {
                let mut order = if *wild2 { 2u64 } else { 1 };
                for (&p, &t) in tame {
                    order = num_integer::lcm(order, residue_order(t, p));
                }
                TorsionInfo::of_order(order)
            }
            NfData::QHigh { real } => TorsionInfo::of_order(if *real { 2 } else { 1 }),
            NfData::FqUnits { dlog } => {
                // additive order in Z/(q-1); q is recoverable from the field
                let q = self.field.fq().expect("finite field").q;
                let g = num_integer::gcd(*dlog, q - 1);
                TorsionInfo::of_order((q - 1) / g)
            }
            NfData::TrivialGroup => TorsionInfo::of_order(1),
            NfData::Real { neg, residue } => match residue.certified_zero() {
                Some(true) => TorsionInfo::of_order(if *neg { 2 } else { 1 }),
                Some(false) => TorsionInfo::not_torsion(),
                None => return Err(unknown_residue()),
            },
            NfData::Complex { residue } => match residue {
                Residue::Value(v) => {
                    // rational roots of unity are the two signs
                    if v.is_one() {
                        TorsionInfo::of_order(1)
                    } else if (-v).is_one() {
                        TorsionInfo::of_order(2)
                    } else {
                        TorsionInfo::not_torsion()
                    }
                }
                Residue::Zero => TorsionInfo::of_order(1),
                Residue::Formal(_) => return Err(unknown_residue()),
            },
        })
    }
}

fn unknown_residue() -> Error {
    Error::Unknown(
        "a divisible residue over R or C cannot be certified zero or nonzero".into(),
    )
}

/// Mod-two normal form. Always decidable: the divisible summands over R and
/// C die modulo two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mod2Nf {
    pub field: FieldSpec,
    pub degree: u32,
    pub data: Nf2Data,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Nf2Data {
    Bit(bool),
    QUnits2 { neg: bool, primes: BTreeSet<u64> },
    QTwo2 { wild2: bool, odd: BTreeSet<u64> },
    Zero,
}

impl Mod2Nf {
    pub fn is_zero(&self) -> bool {
        match &self.data {
            Nf2Data::Bit(b) => !b,
            Nf2Data::QUnits2 { neg, primes } => !neg && primes.is_empty(),
            Nf2Data::QTwo2 { wild2, odd } => !wild2 && odd.is_empty(),
            Nf2Data::Zero => true,
        }
    }
}

/// Exact factorization data of a nonzero rational: sign and per-prime
/// exponents.
struct RatFact {
    neg: bool,
    exps: BTreeMap<u64, i64>,
}

fn factor_rational(r: &BigRational) -> Result<RatFact> {
    use num_traits::ToPrimitive;
    let neg = r.is_negative();
    let num = r.numer().magnitude().to_u64().ok_or_else(too_big)?;
    let den = r.denom().magnitude().to_u64().ok_or_else(too_big)?;
    let mut exps: BTreeMap<u64, i64> = BTreeMap::new();
    for (p, e) in crate::arith::factor_u64(num) {
        *exps.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in crate::arith::factor_u64(den) {
        *exps.entry(p).or_insert(0) -= e as i64;
    }
    exps.retain(|_, e| *e != 0);
    Ok(RatFact { neg, exps })
}

fn too_big() -> Error {
    Error::Unsupported("symbol entry exceeds the 64-bit factorization bound".into())
}

/// Residue mod p of the p-unit part of a factored rational.
fn unit_residue(f: &RatFact, p: u64) -> u64 {
    let mut acc = if f.neg { p - 1 } else { 1u64 };
    for (&q, &e) in &f.exps {
        if q == p {
            continue;
        }
        let exp = e.rem_euclid(p as i64 - 1) as u64;
        acc = mul_mod(acc, pow_mod(q % p, exp, p), p);
    }
    acc
}

pub(super) fn normal_form(elt: &MilnorElt) -> Result<MilnorNf> {
    let field = elt.field().clone();
    let degree = elt.degree();
    let data = match (field.kind(), degree) {
        (_, 0) => NfData::Int(elt.constant_coeff()),
        (FieldKind::Rationals, 1) => {
            let mut neg = false;
            let mut exps: BTreeMap<u64, i64> = BTreeMap::new();
            for (sym, c) in elt.terms() {
                let f = factor_rational(sym.entries()[0].rat()?)?;
                if f.neg && c % 2 != 0 {
                    neg = !neg;
                }
                for (p, e) in f.exps {
                    let add = e.checked_mul(*c).ok_or(Error::Overflow("exponent"))?;
                    *exps.entry(p).or_insert(0) += add;
                }
            }
            exps.retain(|_, e| *e != 0);
            NfData::QUnits { neg, exps }
        }
        (FieldKind::Rationals, 2) => {
            let mut wild2 = false;
            let mut tame: BTreeMap<u64, u64> = BTreeMap::new();
            let qf = FieldSpec::rationals();
            for (sym, c) in elt.terms() {
                let a = sym.entries()[0].rat()?;
                let b = sym.entries()[1].rat()?;
                let fa = factor_rational(a)?;
                let fb = factor_rational(b)?;
                // 2-adic bit via the Hilbert symbol at 2
                let ca = square_class(&qf, &FieldElt::Rat(a.clone()))?;
                let cb = square_class(&qf, &FieldElt::Rat(b.clone()))?;
                if hilbert_symbol_classes(&ca, &cb, &Place::Prime(2))? == -1 && c % 2 != 0 {
                    wild2 = !wild2;
                }
                // tame symbols at the odd primes of the support
                let mut support: BTreeSet<u64> = fa.exps.keys().copied().collect();
                support.extend(fb.exps.keys().copied());
                support.remove(&2);
                for p in support {
                    let alpha = fa.exps.get(&p).copied().unwrap_or(0);
                    let beta = fb.exps.get(&p).copied().unwrap_or(0);
                    let mut t = 1u64;
                    if (alpha * beta) % 2 != 0 {
                        t = p - 1; // (-1)^{alpha beta}
                    }
                    let ua = unit_residue(&fa, p);
                    let ub = unit_residue(&fb, p);
                    let pb = beta.rem_euclid(p as i64 - 1) as u64;
                    let pa_neg = (-alpha).rem_euclid(p as i64 - 1) as u64;
                    t = mul_mod(t, pow_mod(ua, pb, p), p);
                    t = mul_mod(t, pow_mod(ub, pa_neg, p), p);
                    // fold in the coefficient
                    let pc = c.rem_euclid(p as i64 - 1) as u64;
                    let tc = pow_mod(t, pc, p);
                    let cur = tame.entry(p).or_insert(1);
                    *cur = mul_mod(*cur, tc, p);
                }
            }
            tame.retain(|_, t| *t != 1);
            NfData::QTwo { wild2, tame }
        }
        (FieldKind::Rationals, _) => NfData::QHigh { real: real_sign_bit(elt)? },
        (FieldKind::Finite(fq), 1) => {
            let group = fq.q - 1;
            let mut dlog = 0u64;
            for (sym, c) in elt.terms() {
                let FieldElt::Fin(e) = sym.entries()[0] else {
                    return Err(Error::Internal("finite entry expected".into()));
                };
                let d = fq.dlog(e)?;
                let cc = c.rem_euclid(group as i64) as u64;
                dlog = (dlog + mul_mod(d, cc, group)) % group;
            }
            NfData::FqUnits { dlog }
        }
        (FieldKind::Finite(_), _) => NfData::TrivialGroup,
        (FieldKind::Reals, 1) => {
            let mut value = BigRational::one();
            for (sym, c) in elt.terms() {
                let a = sym.entries()[0].rat()?;
                value *= rational_pow(a, *c);
            }
            let neg = value.is_negative();
            NfData::Real { neg, residue: Residue::Value(value.abs()) }
        }
        (FieldKind::Reals, _) => {
            let neg = real_sign_bit(elt)?;
            NfData::Real { neg, residue: positive_residue(elt)? }
        }
        (FieldKind::Complexes, 1) => {
            let mut value = BigRational::one();
            for (sym, c) in elt.terms() {
                let a = sym.entries()[0].rat()?;
                value *= rational_pow(a, *c);
            }
            NfData::Complex { residue: Residue::Value(value) }
        }
        (FieldKind::Complexes, _) => NfData::Complex { residue: positive_residue(elt)? },
    };
    Ok(MilnorNf { field, degree, data })
}

pub(super) fn mod2_form(elt: &MilnorElt) -> Result<Mod2Nf> {
    let field = elt.field().clone();
    let degree = elt.degree();
    let data = match (field.kind(), degree) {
        (_, 0) => Nf2Data::Bit(elt.constant_coeff().rem_euclid(2) == 1),
        (FieldKind::Rationals, 1) => {
            let nf = normal_form(elt)?;
            let NfData::QUnits { neg, exps } = nf.data else { unreachable!() };
            Nf2Data::QUnits2 {
                neg,
                primes: exps.into_iter().filter(|(_, e)| e % 2 != 0).map(|(p, _)| p).collect(),
            }
        }
        (FieldKind::Rationals, 2) => {
            let nf = normal_form(elt)?;
            let NfData::QTwo { wild2, tame } = nf.data else { unreachable!() };
            let odd = tame
                .into_iter()
                .filter(|(p, t)| pow_mod(*t, (p - 1) / 2, *p) != 1)
                .map(|(p, _)| p)
                .collect();
            Nf2Data::QTwo2 { wild2, odd }
        }
        (FieldKind::Rationals, _) => Nf2Data::Bit(real_sign_bit(elt)?),
        (FieldKind::Finite(fq), 1) => {
            // q - 1 is even, so the parity of the discrete log survives mod 2
            let nf = normal_form(elt)?;
            let NfData::FqUnits { dlog } = nf.data else { unreachable!() };
            let _ = fq;
            Nf2Data::Bit(dlog % 2 == 1)
        }
        (FieldKind::Finite(_), _) => Nf2Data::Zero,
        (FieldKind::Reals, _) => Nf2Data::Bit(real_sign_bit(elt)?),
        (FieldKind::Complexes, _) => Nf2Data::Zero,
    };
    Ok(Mod2Nf { field, degree, data })
}

fn rational_pow(a: &BigRational, c: i64) -> BigRational {
    use num_traits::Pow;
    let e: i32 = c.try_into().expect("symbol coefficient fits in i32");
    Pow::pow(a, e)
}

/// Parity of the coefficients of the all-entries-negative symbols: the image
/// in the mod-two ring of R, where only the sign class survives.
pub(super) fn real_sign_bit(elt: &MilnorElt) -> Result<bool> {
    let mut bit = false;
    for (sym, c) in elt.terms() {
        if c % 2 == 0 {
            continue;
        }
        let all_neg = sym
            .entries()
            .iter()
            .map(|e| e.rat().map(|r| r.is_negative()))
            .collect::<Result<Vec<bool>>>()?
            .iter()
            .all(|&b| b);
        if all_neg && !sym.entries().is_empty() {
            bit = !bit;
        }
    }
    Ok(bit)
}

/// The divisible residue over R and C in degree >= 2: expand entries into
/// sign and magnitude, drop the terms that are provably torsion (hence zero
/// in the divisible part), and collect the surviving positive symbols.
fn positive_residue(elt: &MilnorElt) -> Result<Residue> {
    let mut terms: BTreeMap<Vec<BigRational>, i64> = BTreeMap::new();
    'outer: for (sym, c) in elt.terms() {
        let mut entries: Vec<BigRational> = Vec::with_capacity(sym.entries().len());
        for e in sym.entries() {
            let r = e.rat()?;
            let mag = r.abs();
            if mag.is_one() {
                // a sign slot with no magnitude part: the positive branch of
                // this term is empty
                continue 'outer;
            }
            entries.push(mag);
        }
        // sort with transposition parity
        let mut sign = 1i64;
        let mut v = entries;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                v.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        // repeated entries make the term torsion; Steinberg pairs kill it
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                if v[i] == v[j] {
                    continue 'outer;
                }
                let s = &v[i] + &v[j];
                if s.is_one() {
                    continue 'outer;
                }
            }
        }
        let entry = terms.entry(v).or_insert(0);
        *entry += sign * c;
    }
    terms.retain(|_, c| *c != 0);
    if terms.is_empty() {
        Ok(Residue::Zero)
    } else {
        Ok(Residue::Formal(terms.into_iter().collect()))
    }
}

/// Entry accessor used by the parent module.
impl Symbol {
    pub fn entries(&self) -> &[FieldElt] {
        &self.0
    }
}
