//! Base fields and their primitive arithmetic: square classes, residue
//! symbols, places and orderings.
//!
//! Supported fields are Q, R, C and F_q for odd prime powers q. Elements of
//! Q, R and C are exact rationals (the literal syntax only produces
//! rationals); elements of F_q are index-encoded, see [`finite`].

pub mod finite;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factor_u64, is_prime, mul_mod, pow_mod, squarefree_parts};
use crate::error::{Error, Result};
use finite::FqParams;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldKind {
    Rationals,
    Reals,
    Complexes,
    Finite(Arc<FqParams>),
}

/// A supported base field. Cheap to clone; finite-field tables are shared.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldSpec {
    kind: FieldKind,
}

impl FieldSpec {
    pub fn rationals() -> FieldSpec {
        FieldSpec { kind: FieldKind::Rationals }
    }

    pub fn reals() -> FieldSpec {
        FieldSpec { kind: FieldKind::Reals }
    }

    pub fn complexes() -> FieldSpec {
        FieldSpec { kind: FieldKind::Complexes }
    }

    /// F_q for an odd prime power q; characteristic two is rejected.
    pub fn finite(q: u64) -> Result<FieldSpec> {
        Ok(FieldSpec { kind: FieldKind::Finite(Arc::new(FqParams::new(q)?)) })
    }

    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    pub fn fq(&self) -> Option<&FqParams> {
        match &self.kind {
            FieldKind::Finite(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.kind, FieldKind::Rationals)
    }

    pub fn is_reals(&self) -> bool {
        matches!(self.kind, FieldKind::Reals)
    }

    pub fn is_complexes(&self) -> bool {
        matches!(self.kind, FieldKind::Complexes)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.kind, FieldKind::Finite(_))
    }

    /// A field admits an ordering iff -1 is not a sum of squares; among the
    /// supported fields that means Q and R.
    pub fn is_formally_real(&self) -> bool {
        matches!(self.kind, FieldKind::Rationals | FieldKind::Reals)
    }

    /// All orderings of the field. Q and R each carry exactly one; C and F_q
    /// carry none.
    pub fn orderings(&self) -> Vec<Place> {
        if self.is_formally_real() {
            vec![Place::Real]
        } else {
            Vec::new()
        }
    }

    pub fn same(&self, other: &FieldSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.to_string(), other.to_string()))
        }
    }

    /// Parse an element literal for this field.
    pub fn parse_element(&self, s: &str) -> Result<FieldElt> {
        let s = s.trim();
        match &self.kind {
            FieldKind::Finite(fq) => {
                let v: i64 = s
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad F{} element: {s}", fq.q)))?;
                Ok(FieldElt::Fin(fq.from_int(v)?))
            }
            _ => {
                let r = parse_rational(s)?;
                Ok(FieldElt::Rat(r))
            }
        }
    }

    pub fn element_from_i64(&self, v: i64) -> Result<FieldElt> {
        match &self.kind {
            FieldKind::Finite(fq) => Ok(FieldElt::Fin(fq.from_int(v)?)),
            _ => Ok(FieldElt::Rat(BigRational::from_integer(BigInt::from(v)))),
        }
    }

    pub fn minus_one(&self) -> FieldElt {
        match &self.kind {
            FieldKind::Finite(fq) => FieldElt::Fin(fq.minus_one),
            _ => FieldElt::Rat(-BigRational::one()),
        }
    }

    pub fn one(&self) -> FieldElt {
        match &self.kind {
            FieldKind::Finite(_) => FieldElt::Fin(1),
            _ => FieldElt::Rat(BigRational::one()),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Reals => write!(f, "R"),
            FieldKind::Complexes => write!(f, "C"),
            FieldKind::Finite(p) => write!(f, "F{}", p.q),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("bad rational literal: {s}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(BigRational::new(n, d))
    } else {
        let n: BigInt = s.trim().parse().map_err(|_| bad())?;
        Ok(BigRational::from_integer(n))
    }
}

/// An exact element of a supported field.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FieldElt {
    Rat(BigRational),
    Fin(u64),
}

impl FieldElt {
    pub fn is_zero_in(&self, field: &FieldSpec) -> bool {
        match (self, field.kind()) {
            (FieldElt::Rat(r), _) => r.is_zero(),
            (FieldElt::Fin(e), _) => *e == 0,
        }
    }

    pub fn is_one_in(&self, field: &FieldSpec) -> bool {
        match self {
            FieldElt::Rat(r) => r.is_one(),
            FieldElt::Fin(e) => {
                debug_assert!(field.is_finite());
                *e == 1
            }
        }
    }

    pub fn rat(&self) -> Result<&BigRational> {
        match self {
            FieldElt::Rat(r) => Ok(r),
            FieldElt::Fin(_) => Err(Error::Internal("rational value expected".into())),
        }
    }

    pub fn render(&self) -> String {
        match self {
            FieldElt::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            FieldElt::Fin(e) => e.to_string(),
        }
    }
}

/// Field addition, for the Steinberg checks on symbol entries.
pub fn elt_add(field: &FieldSpec, a: &FieldElt, b: &FieldElt) -> FieldElt {
    match (a, b) {
        (FieldElt::Rat(x), FieldElt::Rat(y)) => FieldElt::Rat(x + y),
        (FieldElt::Fin(x), FieldElt::Fin(y)) => {
            FieldElt::Fin(field.fq().expect("finite field").add(*x, *y))
        }
        _ => unreachable!("mixed element kinds"),
    }
}

pub fn elt_mul(field: &FieldSpec, a: &FieldElt, b: &FieldElt) -> FieldElt {
    match (a, b) {
        (FieldElt::Rat(x), FieldElt::Rat(y)) => FieldElt::Rat(x * y),
        (FieldElt::Fin(x), FieldElt::Fin(y)) => {
            FieldElt::Fin(field.fq().expect("finite field").mul(*x, *y))
        }
        _ => unreachable!("mixed element kinds"),
    }
}

pub fn elt_inv(field: &FieldSpec, a: &FieldElt) -> Result<FieldElt> {
    match a {
        FieldElt::Rat(x) => {
            if x.is_zero() {
                Err(Error::ZeroInput)
            } else {
                Ok(FieldElt::Rat(x.recip()))
            }
        }
        FieldElt::Fin(x) => Ok(FieldElt::Fin(field.fq().expect("finite field").inv(*x)?)),
    }
}

/// A place of the base field. For Q this is the real place or a prime
/// (2 included); R has just the real place; C and F_q have none.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Place {
    pub fn parse(s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "inf" || s == "oo" || s == "real" || s == "∞" {
            return Ok(Place::Real);
        }
        let p: u64 = s
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad place: {s}")))?;
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not a prime place")));
        }
        Ok(Place::Prime(p))
    }
}

/// Canonical square-class data. Equality of square classes is equality of
/// representations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SqRep {
    /// Q: sign and the squarefree positive part as a set of primes.
    Rational { neg: bool, primes: BTreeSet<u64> },
    /// R: a sign.
    Sign { neg: bool },
    /// C: everything is a square.
    One,
    /// F_q: trivial class or the fixed least nonresidue g.
    Finite { nonres: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SquareClass {
    field: FieldSpec,
    rep: SqRep,
}

impl SquareClass {
    pub fn one(field: &FieldSpec) -> SquareClass {
        let rep = match field.kind() {
            FieldKind::Rationals => SqRep::Rational { neg: false, primes: BTreeSet::new() },
            FieldKind::Reals => SqRep::Sign { neg: false },
            FieldKind::Complexes => SqRep::One,
            FieldKind::Finite(_) => SqRep::Finite { nonres: false },
        };
        SquareClass { field: field.clone(), rep }
    }

    pub fn minus_one(field: &FieldSpec) -> SquareClass {
        let rep = match field.kind() {
            FieldKind::Rationals => SqRep::Rational { neg: true, primes: BTreeSet::new() },
            FieldKind::Reals => SqRep::Sign { neg: true },
            FieldKind::Complexes => SqRep::One,
            FieldKind::Finite(fq) => SqRep::Finite { nonres: !fq.is_square(fq.minus_one) },
        };
        SquareClass { field: field.clone(), rep }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rep(&self) -> &SqRep {
        &self.rep
    }

    pub fn is_one(&self) -> bool {
        match &self.rep {
            SqRep::Rational { neg, primes } => !neg && primes.is_empty(),
            SqRep::Sign { neg } => !neg,
            SqRep::One => true,
            SqRep::Finite { nonres } => !nonres,
        }
    }

    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        self.field.same(&other.field)?;
        let rep = match (&self.rep, &other.rep) {
            (SqRep::Rational { neg: n1, primes: p1 }, SqRep::Rational { neg: n2, primes: p2 }) => {
                SqRep::Rational {
                    neg: n1 ^ n2,
                    primes: p1.symmetric_difference(p2).copied().collect(),
                }
            }
            (SqRep::Sign { neg: n1 }, SqRep::Sign { neg: n2 }) => SqRep::Sign { neg: n1 ^ n2 },
            (SqRep::One, SqRep::One) => SqRep::One,
            (SqRep::Finite { nonres: a }, SqRep::Finite { nonres: b }) => {
                SqRep::Finite { nonres: a ^ b }
            }
            _ => unreachable!("field mismatch already checked"),
        };
        Ok(SquareClass { field: self.field.clone(), rep })
    }

    /// Square classes are 2-torsion, so every class is its own inverse.
    pub fn inv(&self) -> SquareClass {
        self.clone()
    }

    pub fn is_negative(&self) -> bool {
        match &self.rep {
            SqRep::Rational { neg, .. } => *neg,
            SqRep::Sign { neg } => *neg,
            _ => false,
        }
    }

    /// The canonical representative as a field element.
    pub fn representative(&self) -> FieldElt {
        match &self.rep {
            SqRep::Rational { neg, primes } => {
                let mut v = BigInt::one();
                for p in primes {
                    v *= BigInt::from(*p);
                }
                if *neg {
                    v = -v;
                }
                FieldElt::Rat(BigRational::from_integer(v))
            }
            SqRep::Sign { neg } => FieldElt::Rat(BigRational::from_integer(BigInt::from(
                if *neg { -1 } else { 1 },
            ))),
            SqRep::One => FieldElt::Rat(BigRational::one()),
            SqRep::Finite { nonres } => {
                let fq = self.field.fq().expect("finite field");
                FieldElt::Fin(if *nonres { fq.nonresidue } else { 1 })
            }
        }
    }

    pub fn render(&self) -> String {
        self.representative().render()
    }

    /// Exact 2-adic valuation parity and odd-part residue data, Q classes only.
    pub fn rational_parts(&self) -> Result<(bool, &BTreeSet<u64>)> {
        match &self.rep {
            SqRep::Rational { neg, primes } => Ok((*neg, primes)),
            _ => Err(Error::Internal("rational square class expected".into())),
        }
    }
}

/// Canonical square class of a nonzero element.
pub fn square_class(field: &FieldSpec, a: &FieldElt) -> Result<SquareClass> {
    if a.is_zero_in(field) {
        return Err(Error::ZeroInput);
    }
    let rep = match field.kind() {
        FieldKind::Rationals => {
            let r = a.rat()?;
            let (neg, primes) = rational_squarefree(r)?;
            SqRep::Rational { neg, primes }
        }
        FieldKind::Reals => SqRep::Sign { neg: a.rat()?.is_negative() },
        FieldKind::Complexes => SqRep::One,
        FieldKind::Finite(fq) => {
            let FieldElt::Fin(e) = a else {
                return Err(Error::Internal("finite field element expected".into()));
            };
            SqRep::Finite { nonres: !fq.is_square(*e) }
        }
    };
    Ok(SquareClass { field: field.clone(), rep })
}

/// Signed squarefree data of a nonzero rational: the class of n*d where
/// n, d are numerator and denominator. Both must fit in 64 bits; larger
/// literals are rejected rather than factored incorrectly.
pub fn rational_squarefree(r: &BigRational) -> Result<(bool, BTreeSet<u64>)> {
    let neg = r.is_negative();
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    let num: u64 = num.to_u64().ok_or_else(|| {
        Error::Unsupported("numerator exceeds the 64-bit factorization bound".into())
    })?;
    let den: u64 = den.to_u64().ok_or_else(|| {
        Error::Unsupported("denominator exceeds the 64-bit factorization bound".into())
    })?;
    if num > i64::MAX as u64 || den > i64::MAX as u64 {
        return Err(Error::Unsupported(
            "literal exceeds the 64-bit factorization bound".into(),
        ));
    }
    let (_, np) = squarefree_parts(num as i64)?;
    let (_, dp) = squarefree_parts(den as i64)?;
    let mut primes: BTreeSet<u64> = np.into_iter().collect();
    for p in dp {
        if !primes.insert(p) {
            primes.remove(&p);
        }
    }
    Ok((neg, primes))
}

/// Legendre symbol (a/p) in {-1, 0, +1} for an odd prime p.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime(p) {
        return Err(Error::InvalidInput(format!("{p} is not an odd prime")));
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

fn legendre_u64(r: u64, p: u64) -> i8 {
    debug_assert!(r % p != 0);
    if pow_mod(r % p, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Valuation parity and odd-part residue of a square class at p, plus the
/// residue of the odd part mod m (m = p or 8).
fn class_local_data(neg: bool, primes: &BTreeSet<u64>, p: u64, m: u64) -> (bool, u64) {
    let val_odd = primes.contains(&p);
    let mut unit = if neg { m - 1 } else { 1u64 };
    for &q in primes {
        if q != p {
            unit = mul_mod(unit, q % m, m);
        }
    }
    (val_odd, unit)
}

/// Hilbert symbol (a, b)_v over Q, taking canonical square classes.
pub fn hilbert_symbol_classes(a: &SquareClass, b: &SquareClass, v: &Place) -> Result<i8> {
    let (an, ap) = a.rational_parts()?;
    let (bn, bp) = b.rational_parts()?;
    Ok(match v {
        Place::Real => {
            if an && bn {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            // (a,b)_2 = (-1)^{eps(u)eps(w) + alpha*omega(w) + beta*omega(u)}
            let (alpha, u8a) = class_local_data(an, ap, 2, 8);
            let (beta, u8b) = class_local_data(bn, bp, 2, 8);
            let eps = |u: u64| (u % 4) == 3;
            let omega = |u: u64| u == 3 || u == 5;
            let mut exp = false;
            if eps(u8a) && eps(u8b) {
                exp = !exp;
            }
            if alpha && omega(u8b) {
                exp = !exp;
            }
            if beta && omega(u8a) {
                exp = !exp;
            }
            if exp {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) => {
            let (alpha, ua) = class_local_data(an, ap, *p, *p);
            let (beta, ub) = class_local_data(bn, bp, *p, *p);
            let mut sym = 1i8;
            if alpha && beta {
                sym *= legendre_u64(p - 1, *p); // (-1/p)
            }
            if beta {
                sym *= legendre_u64(ua, *p);
            }
            if alpha {
                sym *= legendre_u64(ub, *p);
            }
            sym
        }
    })
}

/// Hilbert symbol (a, b)_v for nonzero rationals: +1 iff z^2 = a x^2 + b y^2
/// has a nontrivial solution over the completion of Q at v.
pub fn hilbert_symbol(a: &BigRational, b: &BigRational, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroInput);
    }
    let q = FieldSpec::rationals();
    let ca = square_class(&q, &FieldElt::Rat(a.clone()))?;
    let cb = square_class(&q, &FieldElt::Rat(b.clone()))?;
    hilbert_symbol_classes(&ca, &cb, v)
}

/// Finite support of the Hilbert symbols of a pair of classes: 2 and every
/// prime dividing either squarefree part (the symbol is +1 elsewhere).
pub fn hilbert_support(a: &SquareClass, b: &SquareClass) -> Result<BTreeSet<u64>> {
    let (_, ap) = a.rational_parts()?;
    let (_, bp) = b.rational_parts()?;
    let mut s: BTreeSet<u64> = ap.union(bp).copied().collect();
    s.insert(2);
    Ok(s)
}

/// Whether a square class is a local square at the given place.
pub fn is_local_square(d: &SquareClass, v: &Place) -> Result<bool> {
    let (neg, primes) = d.rational_parts()?;
    Ok(match v {
        Place::Real => !neg,
        Place::Prime(2) => {
            let (val_odd, u8) = class_local_data(neg, primes, 2, 8);
            !val_odd && u8 == 1
        }
        Place::Prime(p) => {
            let (val_odd, u) = class_local_data(neg, primes, *p, *p);
            !val_odd && legendre_u64(u, *p) == 1
        }
    })
}

/// Enumerate square classes of Q in a canonical order: squarefree magnitudes
/// ascending, positive before negative.
pub fn rational_class_iter() -> impl Iterator<Item = SquareClass> {
    let q = FieldSpec::rationals();
    (1i64..).filter(is_squarefree_i64).flat_map(move |m| {
        let pos = square_class(&q, &FieldElt::Rat(BigRational::from_integer(BigInt::from(m))))
            .expect("nonzero");
        let neg = square_class(&q, &FieldElt::Rat(BigRational::from_integer(BigInt::from(-m))))
            .expect("nonzero");
        [pos, neg]
    })
}

fn is_squarefree_i64(n: &i64) -> bool {
    factor_u64(n.unsigned_abs()).values().all(|&e| e == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn rat(n: i64) -> FieldElt {
        FieldElt::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    #[test]
    fn square_class_examples() {
        // 18 = 2 * 3^2
        let c = square_class(&qq(), &rat(18)).unwrap();
        assert_eq!(c.render(), "2");
        // C is quadratically closed
        let c = square_class(&FieldSpec::complexes(), &rat(-5)).unwrap();
        assert!(c.is_one());
        // squares mod 7 are {1, 2, 4}, so 3 is in the nonresidue class
        let f7 = FieldSpec::finite(7).unwrap();
        let squares: Vec<u64> = (1..7).filter(|&a| f7.fq().unwrap().is_square(a)).collect();
        assert_eq!(squares, vec![1, 2, 4]);
        let c = square_class(&f7, &FieldElt::Fin(3)).unwrap();
        assert!(!c.is_one());
        assert_eq!(c.render(), "3");
    }

    #[test]
    fn square_class_is_idempotent_and_kills_squares() {
        let c = square_class(&qq(), &rat(18)).unwrap();
        let again = square_class(&qq(), &c.representative()).unwrap();
        assert_eq!(c, again);
        // a and a*b^2 share a class
        let a = square_class(&qq(), &FieldElt::Rat(parse_rational("-5/8").unwrap())).unwrap();
        assert_eq!(a.render(), "-10");
        let scaled = square_class(
            &qq(),
            &FieldElt::Rat(parse_rational("-5/8").unwrap() * parse_rational("49/9").unwrap()),
        )
        .unwrap();
        assert_eq!(a, scaled);
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(square_class(&qq(), &rat(0)), Err(Error::ZeroInput)));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 97).unwrap(), 1);
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert_eq!(legendre(2, 7).unwrap(), 1); // 2 = 3^2 mod 7
        assert!(legendre(3, 8).is_err());
        assert!(legendre(3, 15).is_err());
    }

    #[test]
    fn hilbert_examples() {
        let m1 = parse_rational("-1").unwrap();
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol(&m1, &m1, &Place::Prime(2)).unwrap(), -1);
        let two = parse_rational("2").unwrap();
        let seven = parse_rational("7").unwrap();
        assert_eq!(
            hilbert_symbol(&two, &seven, &Place::Prime(7)).unwrap(),
            legendre(2, 7).unwrap()
        );
    }

    #[test]
    fn hilbert_minus_one_minus_one_by_search_mod_8() {
        // primitive zeros of x^2 + y^2 + z^2 mod 8 do not exist
        let mut found = false;
        for x in 0..8u32 {
            for y in 0..8u32 {
                for z in 0..8u32 {
                    if (x % 2, y % 2, z % 2) == (0, 0, 0) {
                        continue;
                    }
                    if (x * x + y * y + z * z) % 8 == 0 {
                        found = true;
                    }
                }
            }
        }
        assert!(!found);
    }

    #[test]
    fn formally_real_and_orderings() {
        assert!(FieldSpec::reals().is_formally_real());
        assert!(!FieldSpec::finite(9).unwrap().is_formally_real());
        assert_eq!(qq().orderings(), vec![Place::Real]);
        assert!(FieldSpec::complexes().orderings().is_empty());
    }

    #[test]
    fn hilbert_symmetry_and_reciprocity() {
        // deterministic pseudo-random sample, checked exactly
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0001);
        let q = qq();
        for _ in 0..200 {
            let a = loop {
                let v = rng.gen_range(-400i64..400);
                if v != 0 {
                    break v;
                }
            };
            let b = loop {
                let v = rng.gen_range(-400i64..400);
                if v != 0 {
                    break v;
                }
            };
            let ca = square_class(&q, &rat(a)).unwrap();
            let cb = square_class(&q, &rat(b)).unwrap();
            let mut product = 1i8;
            let mut places: Vec<Place> =
                hilbert_support(&ca, &cb).unwrap().into_iter().map(Place::Prime).collect();
            places.push(Place::Real);
            for v in &places {
                let s1 = hilbert_symbol_classes(&ca, &cb, v).unwrap();
                let s2 = hilbert_symbol_classes(&cb, &ca, v).unwrap();
                assert_eq!(s1, s2, "symmetry at {v} for ({a}, {b})");
                product *= s1;
            }
            assert_eq!(product, 1, "reciprocity for ({a}, {b})");
        }
    }

    #[test]
    fn finite_fields_have_two_square_classes() {
        for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49] {
            let f = FieldSpec::finite(q).unwrap();
            let fq = f.fq().unwrap();
            let squares = (1..q).filter(|&a| fq.is_square(a)).count() as u64;
            assert_eq!(squares, (q - 1) / 2, "q = {q}");
            let minus_one_square = fq.is_square(fq.minus_one);
            assert_eq!(minus_one_square, q % 4 == 1, "q = {q}");
        }
    }
}
