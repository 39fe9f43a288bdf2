//! Diagonal quadratic forms, their classical invariants, the rings W(F) and
//! GW(F), the fundamental-ideal filtration and the torsion/nilpotence
//! decision procedures.
//!
//! Witt classes are stored by a canonical anisotropic representative, so
//! structural equality of classes is equality in W(F). Over Q the
//! representative is synthesized deterministically from the invariants
//! (rank, determinant, Hasse data, signature); over R, C and F_q closed-form
//! classifications apply.

pub mod brute;
mod rational;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{
    hilbert_symbol_classes, square_class, FieldElt, FieldKind, FieldSpec, Place, SquareClass,
};
use crate::milnor::MilnorElt;
use crate::verdict::{NilpotenceInfo, Order, TorsionInfo};

pub const DEFAULT_WITNESS_CAP: u32 = 64;

/// A diagonal quadratic form <a_1, ..., a_n> with unit entries recorded by
/// square class. The empty form is the zero of W and GW.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalForm {
    field: FieldSpec,
    entries: Vec<SquareClass>,
}

/// Classical invariants of a diagonal form. `hasse_minus` lists the places
/// (of Q) where the Hasse symbol is -1; it is +1 everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub rank: usize,
    pub det: SquareClass,
    pub signed_disc: SquareClass,
    pub hasse_minus: BTreeSet<Place>,
    pub signatures: BTreeMap<Place, i64>,
}

impl DiagonalForm {
    pub fn new(field: &FieldSpec, entries: &[FieldElt]) -> Result<DiagonalForm> {
        let classes = entries
            .iter()
            .map(|e| square_class(field, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalForm { field: field.clone(), entries: classes })
    }

    pub fn from_classes(field: &FieldSpec, entries: Vec<SquareClass>) -> Result<DiagonalForm> {
        for c in &entries {
            field.same(c.field())?;
        }
        Ok(DiagonalForm { field: field.clone(), entries })
    }

    pub fn zero(field: &FieldSpec) -> DiagonalForm {
        DiagonalForm { field: field.clone(), entries: Vec::new() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[SquareClass] {
        &self.entries
    }

    /// Orthogonal sum.
    pub fn orth_sum(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.field.same(&other.field)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(DiagonalForm { field: self.field.clone(), entries })
    }

    /// Tensor product: all pairwise entry products.
    pub fn tensor(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        self.field.same(&other.field)?;
        let mut entries = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a.mul(b)?);
            }
        }
        Ok(DiagonalForm { field: self.field.clone(), entries })
    }

    /// Entrywise negation: <a> -> <-a>.
    pub fn negate(&self) -> DiagonalForm {
        let m1 = SquareClass::minus_one(&self.field);
        let entries = self.entries.iter().map(|a| a.mul(&m1).expect("same field")).collect();
        DiagonalForm { field: self.field.clone(), entries }
    }

    pub fn det_class(&self) -> SquareClass {
        let mut d = SquareClass::one(&self.field);
        for a in &self.entries {
            d = d.mul(a).expect("same field");
        }
        d
    }

    /// Signature at the unique ordering of Q or R.
    pub fn signature(&self) -> Option<i64> {
        if !self.field.is_formally_real() {
            return None;
        }
        let mut s = 0i64;
        for a in &self.entries {
            s += if a.is_negative() { -1 } else { 1 };
        }
        Some(s)
    }

    pub fn invariants(&self) -> FormInvariants {
        let n = self.rank();
        let det = self.det_class();
        let m1 = SquareClass::minus_one(&self.field);
        // signed discriminant (-1)^{n(n-1)/2} * det
        let mut signed_disc = det.clone();
        if (n * n.saturating_sub(1) / 2) % 2 == 1 {
            signed_disc = signed_disc.mul(&m1).expect("same field");
        }
        let hasse_minus = if self.field.is_rationals() {
            hasse_minus_places(&self.entries)
        } else {
            BTreeSet::new()
        };
        let mut signatures = BTreeMap::new();
        if let Some(s) = self.signature() {
            signatures.insert(Place::Real, s);
        }
        FormInvariants { rank: n, det, signed_disc, hasse_minus, signatures }
    }

    /// Canonical Witt class: anisotropic kernel with its deterministic
    /// diagonal representative.
    pub fn witt_class(&self) -> Result<WittClass> {
        let aniso = match self.field.kind() {
            FieldKind::Complexes => {
                if self.rank() % 2 == 0 {
                    DiagonalForm::zero(&self.field)
                } else {
                    DiagonalForm::from_classes(
                        &self.field,
                        vec![SquareClass::one(&self.field)],
                    )?
                }
            }
            FieldKind::Reals => {
                let s = self.signature().expect("R is ordered");
                let class = if s >= 0 {
                    SquareClass::one(&self.field)
                } else {
                    SquareClass::minus_one(&self.field)
                };
                DiagonalForm::from_classes(
                    &self.field,
                    std::iter::repeat(class).take(s.unsigned_abs() as usize).collect(),
                )?
            }
            FieldKind::Finite(_) => finite_witt_kernel(self)?,
            FieldKind::Rationals => rational::witt_kernel(self)?,
        };
        Ok(WittClass { field: self.field.clone(), aniso })
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> = self.entries.iter().map(|c| c.render()).collect();
        format!("{}:<{}>", self.field, inner.join(","))
    }
}

impl fmt::Display for DiagonalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Places of Q where the Hasse symbol of the diagonal form is -1.
pub(crate) fn hasse_minus_places(entries: &[SquareClass]) -> BTreeSet<Place> {
    let mut support: BTreeSet<Place> = BTreeSet::new();
    support.insert(Place::Real);
    support.insert(Place::Prime(2));
    for c in entries {
        if let Ok((_, primes)) = c.rational_parts() {
            for &p in primes {
                support.insert(Place::Prime(p));
            }
        }
    }
    let mut out = BTreeSet::new();
    for v in support {
        let mut s = 1i8;
        for i in 0..entries.len() {
            for j in i + 1..entries.len() {
                s *= hilbert_symbol_classes(&entries[i], &entries[j], &v).expect("Q classes");
            }
        }
        if s == -1 {
            out.insert(v);
        }
    }
    out
}

/// Anisotropic kernel over F_q from the (rank, det) classification:
/// rank 1 kernels are <d>, and the unique anisotropic plane is the binary
/// form of determinant d with -d a nonsquare.
fn finite_witt_kernel(form: &DiagonalForm) -> Result<DiagonalForm> {
    let field = form.field();
    let fq = field.fq().expect("finite field");
    let n = form.rank();
    let d = form.det_class();
    let one = SquareClass::one(field);
    let m1 = SquareClass::minus_one(field);
    let g = square_class(field, &FieldElt::Fin(fq.nonresidue))?;
    if n % 2 == 0 {
        // trivial iff d = (-1)^{n/2}
        let target = if (n / 2) % 2 == 1 { m1.clone() } else { one.clone() };
        if d == target {
            Ok(DiagonalForm::zero(field))
        } else {
            // anisotropic plane: <1, 1> if -1 is a nonsquare, else <1, g>
            let second = if m1.is_one() { g } else { one };
            DiagonalForm::from_classes(field, vec![SquareClass::one(field), second])
        }
    } else {
        // residual rank 1 with class d * (-1)^{(n-1)/2}
        let mut e = d;
        if ((n - 1) / 2) % 2 == 1 {
            e = e.mul(&m1)?;
        }
        DiagonalForm::from_classes(field, vec![e])
    }
}

/// Additive order bound used by the doubling loops; torsion orders of the
/// supported Witt rings divide 4, the slack is headroom only.
const ORDER_CAP: u64 = 1 << 12;

/// An element of the Witt ring, stored by its canonical anisotropic
/// representative. Two classes are equal iff their representatives agree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittClass {
    field: FieldSpec,
    aniso: DiagonalForm,
}

impl WittClass {
    pub fn zero(field: &FieldSpec) -> WittClass {
        WittClass { field: field.clone(), aniso: DiagonalForm::zero(field) }
    }

    pub fn one(field: &FieldSpec) -> WittClass {
        let aniso = DiagonalForm::from_classes(field, vec![SquareClass::one(field)])
            .expect("rank one form");
        WittClass { field: field.clone(), aniso }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn aniso(&self) -> &DiagonalForm {
        &self.aniso
    }

    pub fn is_zero(&self) -> bool {
        self.aniso.rank() == 0
    }

    pub fn rank_parity_even(&self) -> bool {
        self.aniso.rank() % 2 == 0
    }

    pub fn add(&self, other: &WittClass) -> Result<WittClass> {
        self.aniso.orth_sum(&other.aniso)?.witt_class()
    }

    pub fn neg(&self) -> WittClass {
        WittClass { field: self.field.clone(), aniso: self.aniso.negate() }
    }

    pub fn sub(&self, other: &WittClass) -> Result<WittClass> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &WittClass) -> Result<WittClass> {
        self.aniso.tensor(&other.aniso)?.witt_class()
    }

    pub fn scalar_mul(&self, k: i64) -> Result<WittClass> {
        let base = if k < 0 { self.neg() } else { self.clone() };
        let mut acc = WittClass::zero(&self.field);
        for _ in 0..k.unsigned_abs() {
            acc = acc.add(&base)?;
        }
        Ok(acc)
    }

    pub fn signature(&self) -> Option<i64> {
        self.aniso.signature()
    }

    /// Torsion test. Over the formally real fields torsion is the joint
    /// kernel of the signatures; non-real Witt rings are all torsion. The
    /// order is found by doubling and is always a power of two.
    pub fn torsion(&self) -> Result<TorsionInfo> {
        let torsion = if self.field.is_formally_real() {
            self.signature() == Some(0)
        } else {
            true
        };
        if !torsion {
            return Ok(TorsionInfo { torsion: false, order: Order::Infinite });
        }
        let mut order = 1u64;
        let mut x = self.clone();
        while !x.is_zero() {
            x = x.add(&x)?;
            order *= 2;
            if order > ORDER_CAP {
                return Err(Error::Internal("torsion order cap exceeded".into()));
            }
        }
        Ok(TorsionInfo { torsion: true, order: Order::Finite(order) })
    }

    /// Nilpotence: exactly the even-rank torsion classes. The witness is the
    /// least exponent found by iterated multiplication, capped.
    pub fn nilpotence(&self, cap: u32) -> Result<NilpotenceInfo> {
        let t = self.torsion()?;
        if !(t.torsion && self.rank_parity_even()) {
            return Ok(NilpotenceInfo { nilpotent: false, exponent: None });
        }
        let mut power = self.clone();
        for e in 1..=cap {
            if power.is_zero() {
                return Ok(NilpotenceInfo { nilpotent: true, exponent: Some(e) });
            }
            power = power.mul(self)?;
        }
        Err(Error::Internal(format!(
            "nilpotence witness not found within cap {cap}"
        )))
    }

    /// Membership in the n-th power of the fundamental ideal.
    pub fn in_ideal_power(&self, n: u32) -> Result<bool> {
        if n == 0 {
            return Ok(true);
        }
        let even = self.rank_parity_even();
        if n == 1 {
            return Ok(even);
        }
        match self.field.kind() {
            FieldKind::Complexes | FieldKind::Finite(_) => {
                // I^2 vanishes: every 2-fold Pfister form is isotropic
                Ok(self.is_zero())
            }
            FieldKind::Reals => {
                let s = self.signature().expect("ordered");
                if n >= 63 {
                    return Ok(s == 0);
                }
                Ok(s % (1i64 << n) == 0)
            }
            FieldKind::Rationals => {
                if !even {
                    return Ok(false);
                }
                let inv = self.aniso.invariants();
                if !inv.signed_disc.is_one() {
                    return Ok(false);
                }
                if n == 2 {
                    return Ok(true);
                }
                // degree-three test: the Clifford class must vanish at every
                // place; beyond that only the signature divisibility is left
                if !self.clifford_minus_places()?.is_empty() {
                    return Ok(false);
                }
                let s = self.signature().expect("ordered");
                debug_assert!(s % 8 == 0);
                if n >= 63 {
                    return Ok(s == 0);
                }
                Ok(s % (1i64 << n) == 0)
            }
        }
    }

    /// Places of Q where the Clifford (Witt) invariant of this class is -1.
    /// Computed from the Hasse symbols of the anisotropic representative via
    /// the rank mod 8 correction table.
    pub fn clifford_minus_places(&self) -> Result<BTreeSet<Place>> {
        if !self.field.is_rationals() {
            return Err(Error::Internal("clifford places are computed over Q".into()));
        }
        let inv = self.aniso.invariants();
        let m1 = SquareClass::minus_one(&self.field);
        let correction: Option<(SquareClass, SquareClass)> = match inv.rank % 8 {
            1 | 2 => None,
            3 | 4 => Some((m1.clone(), inv.det.mul(&m1)?)),
            5 | 6 => Some((m1.clone(), m1.clone())),
            _ => Some((m1.clone(), inv.det.clone())),
        };
        let mut support: BTreeSet<Place> = inv.hasse_minus.clone();
        support.insert(Place::Real);
        support.insert(Place::Prime(2));
        if let Some((_, ref b)) = correction {
            if let Ok((_, primes)) = b.rational_parts() {
                for &p in primes {
                    support.insert(Place::Prime(p));
                }
            }
        }
        let mut out = BTreeSet::new();
        for v in support {
            let mut c = if inv.hasse_minus.contains(&v) { -1i8 } else { 1 };
            if let Some((ref a, ref b)) = correction {
                c *= hilbert_symbol_classes(a, b, &v)?;
            }
            if c == -1 {
                out.insert(v);
            }
        }
        Ok(out)
    }

    /// The degree-n invariant of a class in I^n, as a mod-2 Milnor element:
    /// rank parity, signed discriminant, Clifford class and the higher
    /// signature-divisibility invariants where the classification is exact.
    pub fn en_invariant(&self, n: u32) -> Result<MilnorElt> {
        if !self.in_ideal_power(n)? {
            return Err(Error::InvalidInput(format!(
                "class is not in I^{n}, its degree-{n} invariant is undefined"
            )));
        }
        if self.field.is_rationals() && n > 3 {
            return Err(Error::Unsupported(
                "invariants of degree above three are not classified over Q".into(),
            ));
        }
        match n {
            0 => MilnorElt::constant(&self.field, (self.aniso.rank() % 2) as i64),
            1 => {
                let inv = self.aniso.invariants();
                MilnorElt::from_symbol(&self.field, &[inv.signed_disc.representative()])
            }
            2 => self.e2_milnor(),
            _ => match self.field.kind() {
                FieldKind::Reals | FieldKind::Rationals => {
                    let s = self.signature().expect("ordered");
                    let m = (s >> n).rem_euclid(2);
                    let minus_one = self.field.minus_one();
                    let entries = vec![minus_one; n as usize];
                    let sym = MilnorElt::from_symbol(&self.field, &entries)?;
                    sym.scalar_mul(m)
                }
                // I^n vanishes for n >= 2, so the class is zero here
                _ => Ok(MilnorElt::zero(&self.field, n)),
            },
        }
    }

    fn e2_milnor(&self) -> Result<MilnorElt> {
        match self.field.kind() {
            FieldKind::Rationals | FieldKind::Reals => {
                let entries = self.aniso.entries();
                let mut acc = MilnorElt::zero(&self.field, 2);
                for i in 0..entries.len() {
                    for j in i + 1..entries.len() {
                        let s = MilnorElt::from_symbol(
                            &self.field,
                            &[entries[i].representative(), entries[j].representative()],
                        )?;
                        acc = acc.add(&s)?;
                    }
                }
                let m1 = self.field.minus_one();
                let det = self.aniso.det_class();
                let corr = match self.aniso.rank() % 8 {
                    1 | 2 => None,
                    3 | 4 => {
                        let md = det.mul(&SquareClass::minus_one(&self.field))?;
                        Some(vec![m1, md.representative()])
                    }
                    5 | 6 => Some(vec![m1.clone(), m1]),
                    _ => Some(vec![m1, det.representative()]),
                };
                if let Some(entries) = corr {
                    let s = MilnorElt::from_symbol(&self.field, &entries)?;
                    acc = acc.add(&s)?;
                }
                Ok(acc)
            }
            _ => Ok(MilnorElt::zero(&self.field, 2)),
        }
    }

    pub fn render(&self) -> String {
        self.aniso.render()
    }
}

impl fmt::Display for WittClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// An element of the Grothendieck-Witt ring via the cartesian square
/// GW = W x_{Z/2} Z: a Witt class together with a virtual rank of matching
/// parity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GWClass {
    witt: WittClass,
    rank: i64,
}

impl GWClass {
    pub fn new(witt: WittClass, rank: i64) -> Result<GWClass> {
        if (rank.rem_euclid(2) as usize) != witt.aniso.rank() % 2 {
            return Err(Error::IncompatiblePair(format!(
                "virtual rank {rank} does not match the parity of the Witt part (rank {})",
                witt.aniso.rank()
            )));
        }
        Ok(GWClass { witt, rank })
    }

    pub fn from_form(form: &DiagonalForm) -> Result<GWClass> {
        let rank = form.rank() as i64;
        Ok(GWClass { witt: form.witt_class()?, rank })
    }

    pub fn zero(field: &FieldSpec) -> GWClass {
        GWClass { witt: WittClass::zero(field), rank: 0 }
    }

    pub fn one(field: &FieldSpec) -> GWClass {
        GWClass { witt: WittClass::one(field), rank: 1 }
    }

    /// The class epsilon = -<-1>.
    pub fn epsilon(field: &FieldSpec) -> GWClass {
        let m1 = DiagonalForm::from_classes(field, vec![SquareClass::minus_one(field)])
            .expect("rank one");
        GWClass::from_form(&m1).expect("valid").neg()
    }

    /// The hyperbolic class h = <1> + <-1>.
    pub fn hyperbolic(field: &FieldSpec) -> GWClass {
        let one = GWClass::one(field);
        let m1 = DiagonalForm::from_classes(field, vec![SquareClass::minus_one(field)])
            .expect("rank one");
        one.add(&GWClass::from_form(&m1).expect("valid")).expect("same field")
    }

    pub fn field(&self) -> &FieldSpec {
        self.witt.field()
    }

    pub fn witt(&self) -> &WittClass {
        &self.witt
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.witt.is_zero()
    }

    pub fn add(&self, other: &GWClass) -> Result<GWClass> {
        Ok(GWClass { witt: self.witt.add(&other.witt)?, rank: self.rank + other.rank })
    }

    pub fn neg(&self) -> GWClass {
        GWClass { witt: self.witt.neg(), rank: -self.rank }
    }

    pub fn sub(&self, other: &GWClass) -> Result<GWClass> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &GWClass) -> Result<GWClass> {
        Ok(GWClass { witt: self.witt.mul(&other.witt)?, rank: self.rank * other.rank })
    }

    pub fn torsion(&self) -> Result<TorsionInfo> {
        if self.rank != 0 {
            return Ok(TorsionInfo { torsion: false, order: Order::Infinite });
        }
        self.witt.torsion()
    }

    /// Nilpotent elements of GW are exactly the torsion ones.
    pub fn nilpotence(&self, cap: u32) -> Result<NilpotenceInfo> {
        let t = self.torsion()?;
        if !t.torsion {
            return Ok(NilpotenceInfo { nilpotent: false, exponent: None });
        }
        let mut power = self.clone();
        for e in 1..=cap {
            if power.is_zero() {
                return Ok(NilpotenceInfo { nilpotent: true, exponent: Some(e) });
            }
            power = power.mul(self)?;
        }
        Err(Error::Internal(format!(
            "nilpotence witness not found within cap {cap}"
        )))
    }
}

impl fmt::Display for GWClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // rendered as Witt part and virtual rank; the literal module prints
        // parseable expressions
        write!(f, "GW(witt = {}, rank = {})", self.witt.render(), self.rank)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldElt;
    use crate::verdict::Order;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn qq() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn form(field: &FieldSpec, entries: &[i64]) -> DiagonalForm {
        let elts: Vec<FieldElt> =
            entries.iter().map(|&x| field.element_from_i64(x).unwrap()).collect();
        DiagonalForm::new(field, &elts).unwrap()
    }

    #[test]
    fn invariants_examples() {
        let r = FieldSpec::reals();
        let inv = form(&r, &[1, 1]).invariants();
        assert_eq!(inv.rank, 2);
        assert_eq!(inv.signatures.get(&Place::Real), Some(&2));

        let inv = form(&qq(), &[1, -1]).invariants();
        assert_eq!(inv.signatures.get(&Place::Real), Some(&0));
        assert!(inv.signed_disc.is_one());

        let inv = form(&qq(), &[1, 1]).invariants();
        assert_eq!(inv.signed_disc, SquareClass::minus_one(&qq()));
    }

    #[test]
    fn hyperbolic_plane_is_witt_trivial() {
        for field in [qq(), FieldSpec::reals(), FieldSpec::complexes(), FieldSpec::finite(7).unwrap()] {
            let w = form(&field, &[1, -1]).witt_class().unwrap();
            assert!(w.is_zero(), "field {field}");
        }
    }

    #[test]
    fn four_squares_vanish_over_f3() {
        let f3 = FieldSpec::finite(3).unwrap();
        let w = form(&f3, &[1, 1, 1, 1]).witt_class().unwrap();
        assert!(w.is_zero());
        // independent route: isotropy-search reduction
        assert!(brute::witt_reduce(f3.fq().unwrap(), &[1, 1, 1, 1]).is_empty());
    }

    #[test]
    fn sum_of_two_squares_is_anisotropic_over_q() {
        let w = form(&qq(), &[1, 1]).witt_class().unwrap();
        assert_eq!(w.aniso().rank(), 2);
        assert_eq!(*w.aniso(), form(&qq(), &[1, 1]));
    }

    #[test]
    fn witt_ring_of_f3_is_cyclic_of_order_four() {
        let f3 = FieldSpec::finite(3).unwrap();
        let one = WittClass::one(&f3);
        assert_eq!(one.mul(&one).unwrap(), one);
        let t = one.torsion().unwrap();
        assert!(t.torsion);
        assert_eq!(t.order, Order::Finite(4));
        // matches the isotropy oracle
        assert_eq!(brute::additive_order(f3.fq().unwrap(), &[1], 16), Some(4));
        let zero = WittClass::zero(&f3);
        assert_eq!(zero.torsion().unwrap().order, Order::Finite(1));
    }

    #[test]
    fn gw_difference_class_squares_to_its_double_over_f3() {
        let f3 = FieldSpec::finite(3).unwrap();
        let g = GWClass::one(&f3).sub(&GWClass::from_form(&form(&f3, &[-1])).unwrap()).unwrap();
        let sq = g.mul(&g).unwrap();
        let doubled = g.add(&g).unwrap();
        assert_eq!(sq, doubled);
        assert!(doubled.is_zero());
        let v = g.nilpotence(64).unwrap();
        assert!(v.nilpotent);
        assert_eq!(v.exponent, Some(2));
    }

    #[test]
    fn torsion_examples() {
        assert!(!form(&qq(), &[1, 1]).witt_class().unwrap().torsion().unwrap().torsion);
        let f3 = FieldSpec::finite(3).unwrap();
        let t = form(&f3, &[1]).witt_class().unwrap().torsion().unwrap();
        assert!(t.torsion);
        assert_eq!(t.order, Order::Finite(4));
    }

    #[test]
    fn nilpotence_examples() {
        let f3 = FieldSpec::finite(3).unwrap();
        let plane = form(&f3, &[1, 1]).witt_class().unwrap();
        let v = plane.nilpotence(64).unwrap();
        assert!(v.nilpotent);
        assert_eq!(v.exponent, Some(2));
        assert!(!form(&f3, &[1]).witt_class().unwrap().nilpotence(64).unwrap().nilpotent);
        let r = FieldSpec::reals();
        assert!(!form(&r, &[1, 1]).witt_class().unwrap().nilpotence(64).unwrap().nilpotent);
        // not nilpotent in GW either: rank grows
        assert!(!GWClass::one(&qq()).nilpotence(64).unwrap().nilpotent);
        assert!(!GWClass::hyperbolic(&qq()).nilpotence(64).unwrap().nilpotent);
    }

    #[test]
    fn ideal_power_examples() {
        let r = FieldSpec::reals();
        let two = form(&r, &[1, 1]).witt_class().unwrap();
        assert!(two.in_ideal_power(1).unwrap());
        assert!(!two.in_ideal_power(2).unwrap());
        let four = form(&r, &[1, 1, 1, 1]).witt_class().unwrap();
        assert!(four.in_ideal_power(2).unwrap());
        assert!(!four.in_ideal_power(3).unwrap());
        let zero = WittClass::zero(&qq());
        for n in 0..=10 {
            assert!(zero.in_ideal_power(n).unwrap());
        }
    }

    #[test]
    fn en_invariant_examples() {
        use crate::milnor::MilnorElt;
        let e1 = form(&qq(), &[1, 1]).witt_class().unwrap().en_invariant(1).unwrap();
        let expected =
            MilnorElt::from_symbol(&qq(), &[qq().element_from_i64(-1).unwrap()]).unwrap();
        assert_eq!(e1.mod2_form().unwrap(), expected.mod2_form().unwrap());

        let r = FieldSpec::reals();
        let e2 = form(&r, &[1, 1, 1, 1]).witt_class().unwrap().en_invariant(2).unwrap();
        let expected =
            MilnorElt::from_symbol(&r, &[r.minus_one(), r.minus_one()]).unwrap();
        assert_eq!(e2, expected);

        let e0 = WittClass::zero(&qq()).en_invariant(0).unwrap();
        assert!(e0.is_syntactic_zero());

        // out of the classified range over Q
        let w = form(&qq(), &[1, -1]).witt_class().unwrap();
        assert!(w.en_invariant(4).is_err());
    }

    #[test]
    fn witt_class_is_invariant_under_presentation_changes() {
        let q = qq();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
        for _ in 0..200 {
            let rank = rng.gen_range(0..=5usize);
            let mut entries: Vec<i64> = Vec::new();
            for _ in 0..rank {
                loop {
                    let v = rng.gen_range(-30i64..=30);
                    if v != 0 {
                        entries.push(v);
                        break;
                    }
                }
            }
            let base = form(&q, &entries);
            let w = base.witt_class().unwrap();

            // scale an entry by a square, permute, pad with hyperbolics
            let mut scrambled: Vec<i64> = entries.clone();
            if !scrambled.is_empty() {
                let i = rng.gen_range(0..scrambled.len());
                let s = rng.gen_range(2i64..=5);
                scrambled[i] = scrambled[i].saturating_mul(s * s);
                scrambled.rotate_left(i);
            }
            let a = loop {
                let v = rng.gen_range(-20i64..=20);
                if v != 0 {
                    break v;
                }
            };
            scrambled.push(a);
            scrambled.push(-a);
            let w2 = form(&q, &scrambled).witt_class().unwrap();
            assert_eq!(w, w2, "entries {entries:?} vs {scrambled:?}");

            // binary chain move: <a, b> ~ <a + b, (a + b) a b> when a+b != 0
            if entries.len() >= 2 && entries[0] + entries[1] != 0 {
                let (a, b) = (entries[0], entries[1]);
                let mut moved: Vec<i64> = vec![a + b, (a + b) * a * b];
                moved.extend(&entries[2..]);
                let w3 = form(&q, &moved).witt_class().unwrap();
                assert_eq!(w, w3, "chain move on {entries:?}");
            }
        }
    }

    #[test]
    fn finite_classification_matches_the_isotropy_oracle() {
        for qsize in [3u64, 5, 7, 9] {
            let f = FieldSpec::finite(qsize).unwrap();
            let fq = f.fq().unwrap();
            let g = fq.nonresidue;
            for rank in 0..=6usize {
                for mask in 0..(1u32 << rank) {
                    let entries: Vec<u64> =
                        (0..rank).map(|i| if mask >> i & 1 == 1 { g } else { 1 }).collect();
                    let elts: Vec<FieldElt> = entries.iter().map(|&e| FieldElt::Fin(e)).collect();
                    let w = DiagonalForm::new(&f, &elts).unwrap().witt_class().unwrap();
                    let reduced = brute::witt_reduce(fq, &entries);
                    assert_eq!(
                        w.aniso().rank(),
                        reduced.len(),
                        "q = {qsize}, entries {entries:?}"
                    );
                    // determinants of the residual forms agree as classes
                    let det_dec = w.aniso().det_class();
                    let det_brute = reduced.iter().fold(1u64, |acc, &e| fq.mul(acc, e));
                    if !reduced.is_empty() {
                        let cls = crate::field::square_class(&f, &FieldElt::Fin(det_brute)).unwrap();
                        assert_eq!(det_dec, cls, "q = {qsize}, entries {entries:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn pfister_torsion_criterion_over_q() {
        let q = qq();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
        for _ in 0..100 {
            let rank = rng.gen_range(1..=5usize);
            let entries: Vec<i64> = (0..rank)
                .map(|_| loop {
                    let v = rng.gen_range(-30i64..=30);
                    if v != 0 {
                        break v;
                    }
                })
                .collect();
            let f = form(&q, &entries);
            let w = f.witt_class().unwrap();
            let t = w.torsion().unwrap();
            let sig_zero = f.signature() == Some(0);
            // route three: 4x classified independently from invariants
            let four = w.scalar_mul(4).unwrap();
            assert_eq!(t.torsion, sig_zero, "{entries:?}");
            assert_eq!(t.torsion, four.is_zero(), "{entries:?}");
            if let Order::Finite(o) = t.order {
                assert!(o.is_power_of_two(), "{entries:?}");
            }
        }
    }

    #[test]
    fn nonreal_fields_have_odd_rank_torsion_units() {
        for field in [
            FieldSpec::complexes(),
            FieldSpec::finite(3).unwrap(),
            FieldSpec::finite(5).unwrap(),
            FieldSpec::finite(7).unwrap(),
            FieldSpec::finite(9).unwrap(),
            FieldSpec::finite(11).unwrap(),
            FieldSpec::finite(13).unwrap(),
        ] {
            let one = WittClass::one(&field);
            let t = one.torsion().unwrap();
            assert!(t.torsion, "field {field}");
            assert_eq!(one.aniso().rank() % 2, 1);
        }
    }

    #[test]
    fn formally_real_torsion_classes_have_even_rank() {
        let q = qq();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
        let mut found = 0;
        while found < 40 {
            let rank = rng.gen_range(1..=3usize);
            let entries: Vec<i64> = (0..rank)
                .map(|_| loop {
                    let v = rng.gen_range(-20i64..=20);
                    if v != 0 {
                        break v;
                    }
                })
                .collect();
            // phi + (-phi) always has signature zero, i.e. is torsion
            let mut doubled: Vec<i64> = entries.clone();
            doubled.extend(entries.iter().map(|&x| -x));
            let w = form(&q, &doubled).witt_class().unwrap();
            let t = w.torsion().unwrap();
            assert!(t.torsion);
            assert_eq!(w.aniso().rank() % 2, 0, "{doubled:?}");
            found += 1;
        }
    }

    #[test]
    fn gw_parity_is_enforced() {
        let q = qq();
        let w = form(&q, &[1, 1]).witt_class().unwrap();
        assert!(GWClass::new(w.clone(), 2).is_ok());
        assert!(GWClass::new(w, 3).is_err());
    }
}
