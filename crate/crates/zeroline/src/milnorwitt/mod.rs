//! The Milnor-Witt K-ring assembled as a graded pullback: GW(F) in degree
//! zero, W(F) in negative degrees, and in positive degree n pairs (alpha,
//! phi) of a Milnor element and a class in I^n whose mod-two reductions
//! agree. Multiplication by eta realizes the projection GW -> W and the
//! inclusion shifts I^n -> I^{n-1}.
//!
//! Negative degrees carry a zero Milnor component, so products of mixed-sign
//! degrees are determined by the Witt components alone; products landing in
//! degree >= 0 are flagged as computed through that route.

pub mod scan;

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElt, FieldSpec, SquareClass};
use crate::milnor::MilnorElt;
use crate::quadform::{DiagonalForm, GWClass, WittClass};
use crate::verdict::{rules, NilpotenceVerdict, Order, TorsionInfo, Trilean};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MWPayload {
    /// degree < 0: the class phi eta^{|degree|}, phi in W(F).
    Negative(WittClass),
    /// degree 0.
    Zero(GWClass),
    /// degree n > 0: a pair (alpha, phi) with phi in I^n and
    /// mod-two alpha = e_n(phi).
    Positive { milnor: MilnorElt, witt: WittClass },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MWElt {
    field: FieldSpec,
    degree: i64,
    payload: MWPayload,
}

/// Product result; `via_witt_shadow` marks mixed-sign-degree products, which
/// route through the Witt components (the Milnor component of every
/// negative-degree factor is zero, so the value is still exact).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MwProduct {
    pub value: MWElt,
    pub via_witt_shadow: bool,
}

impl MWElt {
    pub fn from_witt(degree: i64, witt: WittClass) -> Result<MWElt> {
        if degree >= 0 {
            return Err(Error::InvalidInput(
                "plain Witt payloads live in negative degrees".into(),
            ));
        }
        Ok(MWElt { field: witt.field().clone(), degree, payload: MWPayload::Negative(witt) })
    }

    pub fn from_gw(gw: GWClass) -> MWElt {
        MWElt { field: gw.field().clone(), degree: 0, payload: MWPayload::Zero(gw) }
    }

    /// Validated positive-degree pair; rejects mismatched reductions.
    pub fn pair(degree: i64, milnor: MilnorElt, witt: WittClass) -> Result<MWElt> {
        if degree <= 0 {
            return Err(Error::InvalidInput("pairs live in positive degrees".into()));
        }
        milnor.field().same(witt.field())?;
        if milnor.degree() as i64 != degree {
            return Err(Error::InvalidInput(format!(
                "milnor component has degree {}, element degree is {degree}",
                milnor.degree()
            )));
        }
        let n = degree as u32;
        if !witt.in_ideal_power(n)? {
            return Err(Error::IncompatiblePair(format!(
                "witt component {} is not in I^{n}",
                witt.render()
            )));
        }
        let expected = witt.en_invariant(n)?.mod2_form()?;
        let actual = milnor.mod2_form()?;
        if expected != actual {
            return Err(Error::IncompatiblePair(format!(
                "mod-two reduction of the milnor component disagrees with the degree-{n} \
                 invariant of the witt component"
            )));
        }
        Ok(MWElt {
            field: milnor.field().clone(),
            degree,
            payload: MWPayload::Positive { milnor, witt },
        })
    }

    /// Internal constructor for products: the compatibility of a pair built
    /// from compatible pairs is automatic, and the invariant tables cannot
    /// always re-verify it (degrees above three over Q). Debug builds
    /// re-check wherever the tables reach.
    fn pair_internal(degree: i64, milnor: MilnorElt, witt: WittClass) -> MWElt {
        debug_assert!(degree > 0);
        #[cfg(debug_assertions)]
        {
            let n = degree as u32;
            if let Ok(e) = witt.en_invariant(n) {
                let expected = e.mod2_form().expect("mod-two form is total");
                let actual = milnor.mod2_form().expect("mod-two form is total");
                assert_eq!(expected, actual, "pullback compatibility violated by a product");
            }
        }
        MWElt {
            field: milnor.field().clone(),
            degree,
            payload: MWPayload::Positive { milnor, witt },
        }
    }

    /// The element eta in degree -1: the unit class of W(F).
    pub fn eta(field: &FieldSpec) -> MWElt {
        MWElt {
            field: field.clone(),
            degree: -1,
            payload: MWPayload::Negative(WittClass::one(field)),
        }
    }

    pub fn unit(field: &FieldSpec) -> MWElt {
        MWElt::from_gw(GWClass::one(field))
    }

    pub fn zero(field: &FieldSpec, degree: i64) -> Result<MWElt> {
        Ok(match degree.cmp(&0) {
            std::cmp::Ordering::Less => MWElt {
                field: field.clone(),
                degree,
                payload: MWPayload::Negative(WittClass::zero(field)),
            },
            std::cmp::Ordering::Equal => MWElt::from_gw(GWClass::zero(field)),
            std::cmp::Ordering::Greater => MWElt {
                field: field.clone(),
                degree,
                payload: MWPayload::Positive {
                    milnor: MilnorElt::zero(field, degree as u32),
                    witt: WittClass::zero(field),
                },
            },
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn payload(&self) -> &MWPayload {
        &self.payload
    }

    /// The bidegree of the corresponding motivic stable stem: degree n here
    /// is the (-n, -n) diagonal entry.
    pub fn sphere_bidegree(&self) -> (i64, i64) {
        (-self.degree, -self.degree)
    }

    /// The Witt-component shadow: phi for pairs, the GW projection in degree
    /// zero, the class itself in negative degrees.
    pub fn witt_component(&self) -> WittClass {
        match &self.payload {
            MWPayload::Negative(w) => w.clone(),
            MWPayload::Zero(g) => g.witt().clone(),
            MWPayload::Positive { witt, .. } => witt.clone(),
        }
    }

    pub fn is_zero(&self) -> Result<bool> {
        Ok(match &self.payload {
            MWPayload::Negative(w) => w.is_zero(),
            MWPayload::Zero(g) => g.is_zero(),
            MWPayload::Positive { milnor, witt } => milnor.is_zero()? && witt.is_zero(),
        })
    }

    pub fn add(&self, other: &MWElt) -> Result<MWElt> {
        self.field.same(&other.field)?;
        if self.degree != other.degree {
            return Err(Error::InvalidInput(format!(
                "inhomogeneous sum of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(match (&self.payload, &other.payload) {
            (MWPayload::Negative(a), MWPayload::Negative(b)) => MWElt {
                field: self.field.clone(),
                degree: self.degree,
                payload: MWPayload::Negative(a.add(b)?),
            },
            (MWPayload::Zero(a), MWPayload::Zero(b)) => MWElt::from_gw(a.add(b)?),
            (
                MWPayload::Positive { milnor: m1, witt: w1 },
                MWPayload::Positive { milnor: m2, witt: w2 },
            ) => MWElt {
                field: self.field.clone(),
                degree: self.degree,
                payload: MWPayload::Positive { milnor: m1.add(m2)?, witt: w1.add(w2)? },
            },
            _ => unreachable!("equal degrees share a payload shape"),
        })
    }

    pub fn neg(&self) -> MWElt {
        let payload = match &self.payload {
            MWPayload::Negative(w) => MWPayload::Negative(w.neg()),
            MWPayload::Zero(g) => MWPayload::Zero(g.neg()),
            MWPayload::Positive { milnor, witt } => {
                MWPayload::Positive { milnor: milnor.neg(), witt: witt.neg() }
            }
        };
        MWElt { field: self.field.clone(), degree: self.degree, payload }
    }

    pub fn sub(&self, other: &MWElt) -> Result<MWElt> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, k: i64) -> Result<MWElt> {
        let base = if k < 0 { self.neg() } else { self.clone() };
        let mut acc = MWElt::zero(&self.field, self.degree)?;
        for _ in 0..k.unsigned_abs() {
            acc = acc.add(&base)?;
        }
        Ok(acc)
    }

    /// Graded product. Degrees add; within one sign everything is
    /// componentwise, and mixed signs ride on the Witt components.
    pub fn mul(&self, other: &MWElt) -> Result<MwProduct> {
        self.field.same(&other.field)?;
        let degree = self.degree + other.degree;
        let exact = |value: MWElt| MwProduct { value, via_witt_shadow: false };
        Ok(match (&self.payload, &other.payload) {
            (MWPayload::Negative(a), MWPayload::Negative(b)) => exact(MWElt {
                field: self.field.clone(),
                degree,
                payload: MWPayload::Negative(a.mul(b)?),
            }),
            (MWPayload::Zero(a), MWPayload::Zero(b)) => exact(MWElt::from_gw(a.mul(b)?)),
            (MWPayload::Zero(g), MWPayload::Negative(w))
            | (MWPayload::Negative(w), MWPayload::Zero(g)) => exact(MWElt {
                field: self.field.clone(),
                degree,
                payload: MWPayload::Negative(g.witt().mul(w)?),
            }),
            (
                MWPayload::Positive { milnor: m1, witt: w1 },
                MWPayload::Positive { milnor: m2, witt: w2 },
            ) => {
                let value = MWElt::pair_internal(degree, m1.mul(m2)?, w1.mul(w2)?);
                exact(value)
            }
            (MWPayload::Positive { milnor, witt }, MWPayload::Zero(g))
            | (MWPayload::Zero(g), MWPayload::Positive { milnor, witt }) => {
                let value = MWElt::pair_internal(
                    degree,
                    milnor.scalar_mul(g.rank())?,
                    witt.mul(g.witt())?,
                );
                exact(value)
            }
            (MWPayload::Positive { witt, .. }, MWPayload::Negative(w))
            | (MWPayload::Negative(w), MWPayload::Positive { witt, .. }) => {
                let shadow = witt.mul(w)?;
                let value = match degree.cmp(&0) {
                    std::cmp::Ordering::Less => MWElt {
                        field: self.field.clone(),
                        degree,
                        payload: MWPayload::Negative(shadow),
                    },
                    std::cmp::Ordering::Equal => {
                        // the Milnor projection of the negative factor is
                        // zero, so the virtual rank of the product is zero
                        MWElt::from_gw(GWClass::new(shadow, 0)?)
                    }
                    std::cmp::Ordering::Greater => MWElt::pair_internal(
                        degree,
                        MilnorElt::zero(&self.field, degree as u32),
                        shadow,
                    ),
                };
                MwProduct { value, via_witt_shadow: true }
            }
        })
    }

    /// Multiplication by eta: drop one degree. Degree zero projects GW onto
    /// W; negative degrees are untouched on the W part; a positive-degree
    /// pair forgets its Milnor component (whose image dies) and keeps phi one
    /// step lower in the filtration.
    pub fn eta_mul(&self) -> Result<MWElt> {
        let degree = self.degree - 1;
        Ok(match &self.payload {
            MWPayload::Negative(w) => MWElt {
                field: self.field.clone(),
                degree,
                payload: MWPayload::Negative(w.clone()),
            },
            MWPayload::Zero(g) => MWElt {
                field: self.field.clone(),
                degree,
                payload: MWPayload::Negative(g.witt().clone()),
            },
            MWPayload::Positive { witt, .. } => {
                if degree == 0 {
                    MWElt::from_gw(GWClass::new(witt.clone(), 0)?)
                } else {
                    MWElt::pair_internal(
                        degree,
                        MilnorElt::zero(&self.field, degree as u32),
                        witt.clone(),
                    )
                }
            }
        })
    }

    pub fn pow(&self, e: u32) -> Result<MWElt> {
        if e == 0 {
            return Ok(MWElt::unit(&self.field));
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self)?.value;
        }
        Ok(acc)
    }

    pub fn torsion(&self) -> Result<TorsionInfo> {
        match &self.payload {
            MWPayload::Negative(w) => w.torsion(),
            MWPayload::Zero(g) => g.torsion(),
            MWPayload::Positive { milnor, witt } => {
                let tm = milnor.torsion()?;
                let tw = witt.torsion()?;
                if tm.torsion && tw.torsion {
                    let (Order::Finite(a), Order::Finite(b)) = (tm.order, tw.order) else {
                        unreachable!("finite orders for torsion components");
                    };
                    Ok(TorsionInfo::of_order(num_integer::lcm(a, b)))
                } else {
                    Ok(TorsionInfo::not_torsion())
                }
            }
        }
    }

    /// Full nilpotence decision with rule chain and verified witness.
    pub fn nilpotence(&self, cap: u32) -> Result<NilpotenceVerdict> {
        let t = self.torsion()?;
        let mut chain: Vec<String> = Vec::new();
        if self.field.is_formally_real() {
            chain.push(rules::SIGNATURE_KERNEL.into());
        } else {
            chain.push(rules::NONREAL_ALL_TORSION.into());
        }
        let verdict = match &self.payload {
            MWPayload::Negative(w) => {
                chain.push(rules::W_TWO_PRIMARY.into());
                chain.push(rules::W_NILPOTENT.into());
                let info = w.nilpotence(cap)?;
                if !info.nilpotent && t.torsion && !w.rank_parity_even() {
                    chain.push(rules::W_ODD_RANK.into());
                }
                NilpotenceVerdict {
                    is_torsion: t.torsion,
                    torsion_order: t.order,
                    is_nilpotent: if info.nilpotent { Trilean::True } else { Trilean::False },
                    witness_exponent: info.exponent,
                    witness_cap: cap,
                    rule_chain: chain,
                }
            }
            MWPayload::Zero(g) => {
                chain.push(rules::GW_TWO_PRIMARY.into());
                chain.push(rules::GW_NILPOTENT.into());
                if g.rank() != 0 {
                    chain.push(rules::RANK_OBSTRUCTION.into());
                }
                let info = g.nilpotence(cap)?;
                NilpotenceVerdict {
                    is_torsion: t.torsion,
                    torsion_order: t.order,
                    is_nilpotent: if info.nilpotent { Trilean::True } else { Trilean::False },
                    witness_exponent: info.exponent,
                    witness_cap: cap,
                    rule_chain: chain,
                }
            }
            MWPayload::Positive { milnor, witt } => {
                chain.push(rules::PAIR_COMPONENTS.into());
                let winfo = witt.nilpotence(cap)?;
                chain.push(rules::W_NILPOTENT.into());
                let kverdict = milnor.nilpotence(cap)?;
                chain.extend(kverdict.rule_chain.iter().cloned());
                let nilpotent = winfo.nilpotent && kverdict.is_nilpotent.is_true();
                if t.torsion && nilpotent {
                    chain.push(rules::TORSION_PAIR.into());
                }
                let witness = if nilpotent {
                    let w = winfo.exponent.unwrap_or(1).max(kverdict.witness_exponent.unwrap_or(1));
                    // the pair vanishes exactly when both components do, so
                    // the max of the witnesses is a witness; verify when the
                    // zero test is decidable
                    match self.pow(w)?.is_zero() {
                        Ok(true) => {}
                        Ok(false) => {
                            return Err(Error::Internal(
                                "component witnesses did not annihilate the pair".into(),
                            ))
                        }
                        Err(e) if e.is_unknown() => {}
                        Err(e) => return Err(e),
                    }
                    Some(w)
                } else {
                    None
                };
                NilpotenceVerdict {
                    is_torsion: t.torsion,
                    torsion_order: t.order,
                    is_nilpotent: if nilpotent { Trilean::True } else { Trilean::False },
                    witness_exponent: witness,
                    witness_cap: cap,
                    rule_chain: chain,
                }
            }
        };
        verdict.check_invariants();
        Ok(verdict)
    }

    pub fn render(&self) -> String {
        let body = match &self.payload {
            MWPayload::Negative(w) => render_form_body(w.aniso()),
            MWPayload::Zero(g) => render_gw_body(g),
            MWPayload::Positive { milnor, witt } => {
                format!("{} | {}", milnor.render(), render_form_body(witt.aniso()))
            }
        };
        format!("MW({}, {}; {})", self.field, self.degree, body)
    }
}

impl fmt::Display for MWElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

pub fn render_form_body(form: &DiagonalForm) -> String {
    let inner: Vec<String> = form.entries().iter().map(|c| c.render()).collect();
    format!("<{}>", inner.join(","))
}

/// GW classes print as their Witt representative plus hyperbolic padding:
/// the rank defect against the representative is even, so it is a multiple
/// of h.
pub fn render_gw_body(g: &GWClass) -> String {
    let base = render_form_body(g.witt().aniso());
    let defect = g.rank() - g.witt().aniso().rank() as i64;
    debug_assert_eq!(defect.rem_euclid(2), 0);
    let halves = defect / 2;
    match halves {
        0 => base,
        1 => format!("{base} + h"),
        -1 => format!("{base} - h"),
        k if k > 0 => format!("{base} + {k}*h"),
        k => format!("{base} - {}*h", -k),
    }
}

/// The n-fold multiplicative lift of a symbol: the tensor product of the
/// binary forms <1, -a_i>. Its degree-n invariant is the mod-two symbol
/// {a_1, ..., a_n}, which makes it the canonical Witt partner of a symbol.
pub fn pfister_form(field: &FieldSpec, entries: &[FieldElt]) -> Result<DiagonalForm> {
    let mut acc = DiagonalForm::from_classes(field, vec![SquareClass::one(field)])?;
    for a in entries {
        let minus_a = crate::field::elt_mul(field, a, &field.minus_one());
        let factor = DiagonalForm::new(field, &[field.one(), minus_a])?;
        acc = acc.tensor(&factor)?;
    }
    Ok(acc)
}
