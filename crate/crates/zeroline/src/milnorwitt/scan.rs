//! Degreewise nilpotence scan: enumerate (or sample) elements of a fixed
//! degree, run the invariant-based decisions, cross-check them against
//! direct iteration, and collect every torsion element that fails to be
//! nilpotent.
//!
//! Over finite fields the Witt components are additionally checked against
//! the isotropy-search oracle, which shares no code with the classification
//! route.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{FieldElt, FieldKind, FieldSpec};
use crate::milnor::MilnorElt;
use crate::quadform::{brute, DiagonalForm, GWClass, WittClass};
use crate::verdict::{Order, Trilean};

use super::{pfister_form, MWElt};

#[derive(Clone, Copy, Debug)]
pub struct ScanBudget {
    /// Hard cap on the number of elements examined.
    pub max_elements: usize,
    /// Iteration cap for nilpotence witnesses.
    pub witness_cap: u32,
    /// Rank window for virtual ranks and sampled forms.
    pub rank_cap: i64,
    /// Seed for the sampled enumerations (Q only).
    pub seed: u64,
}

impl Default for ScanBudget {
    fn default() -> Self {
        ScanBudget { max_elements: 4096, witness_cap: 64, rank_cap: 8, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
pub struct ScanOutcome {
    pub literal: String,
    pub is_torsion: bool,
    pub torsion_order: Order,
    pub is_nilpotent: Trilean,
    pub witness_exponent: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub field: String,
    pub degree: i64,
    pub sphere_bidegree: (i64, i64),
    pub checked: usize,
    pub torsion_count: usize,
    pub nilpotent_count: usize,
    /// Torsion elements that are not nilpotent.
    pub counterexamples: Vec<ScanOutcome>,
    /// Disagreements between the decision procedures and direct iteration;
    /// expected to stay empty.
    pub mismatches: Vec<String>,
    /// Elements whose torsion status hit an undecidable residue.
    pub unknowns: usize,
    pub budget_exhausted: bool,
}

pub fn nishida_scan(field: &FieldSpec, degree: i64, budget: &ScanBudget) -> Result<ScanReport> {
    let mut elements = enumerate(field, degree, budget)?;
    let mut exhausted = false;
    if elements.len() > budget.max_elements {
        elements.truncate(budget.max_elements);
        exhausted = true;
    }
    let mut report = ScanReport {
        field: field.to_string(),
        degree,
        sphere_bidegree: (-degree, -degree),
        checked: 0,
        torsion_count: 0,
        nilpotent_count: 0,
        counterexamples: Vec::new(),
        mismatches: Vec::new(),
        unknowns: 0,
        budget_exhausted: exhausted,
    };
    for x in &elements {
        match examine(x, budget, &mut report) {
            Ok(()) => {}
            Err(e) if e.is_unknown() => report.unknowns += 1,
            Err(e) => return Err(e),
        }
        report.checked += 1;
    }
    Ok(report)
}

fn examine(x: &MWElt, budget: &ScanBudget, report: &mut ScanReport) -> Result<()> {
    let verdict = x.nilpotence(budget.witness_cap)?;
    if verdict.is_torsion {
        report.torsion_count += 1;
    }
    if verdict.is_nilpotent.is_true() {
        report.nilpotent_count += 1;
    }
    let outcome = ScanOutcome {
        literal: x.render(),
        is_torsion: verdict.is_torsion,
        torsion_order: verdict.torsion_order,
        is_nilpotent: verdict.is_nilpotent,
        witness_exponent: verdict.witness_exponent,
    };
    if verdict.is_torsion && !verdict.is_nilpotent.is_true() {
        report.counterexamples.push(outcome);
    }

    // cross-check torsion order by direct addition
    let mut least = None;
    let mut acc = MWElt::zero(x.field(), x.degree())?;
    for k in 1..=16u64 {
        acc = acc.add(x)?;
        if acc.is_zero()? {
            least = Some(k);
            break;
        }
    }
    match (verdict.is_torsion, verdict.torsion_order, least) {
        (true, Order::Finite(o), Some(k)) if o == k => {}
        (true, Order::Finite(o), _) if o > 16 => {}
        (false, Order::Infinite, None) => {}
        (t, o, k) => report.mismatches.push(format!(
            "{}: decision torsion = {t} order {o}, iteration found {k:?}",
            x.render()
        )),
    }

    // cross-check nilpotence by direct powers; the representative rank of a
    // non-nilpotent class over an ordered field grows geometrically, so the
    // iteration stops once the representative gets large (the power is then
    // certainly nonzero)
    let mut power_zero: Option<u32> = None;
    let mut truncated = false;
    let mut power = x.clone();
    let mut e = 1u32;
    loop {
        if power.is_zero()? {
            power_zero = Some(e);
            break;
        }
        if e >= 8 {
            break;
        }
        if power.witt_component().aniso().rank() > 64 {
            truncated = true;
            break;
        }
        power = power.mul(x)?.value;
        e += 1;
    }
    match (verdict.is_nilpotent, verdict.witness_exponent, power_zero) {
        (Trilean::True, Some(w), Some(e)) if w == e => {}
        (Trilean::True, Some(w), None) if w > 8 => {}
        (Trilean::False, None, None) => {}
        (n, w, e) => report.mismatches.push(format!(
            "{}: decision nilpotent = {n} witness {w:?}, iteration found {e:?} \
             (truncated: {truncated})",
            x.render()
        )),
    }

    // finite fields: check the Witt component against the isotropy oracle
    if let FieldKind::Finite(fq) = x.field().kind() {
        let w = x.witt_component();
        let entries: Vec<u64> = w
            .aniso()
            .entries()
            .iter()
            .map(|c| match c.representative() {
                FieldElt::Fin(e) => e,
                _ => unreachable!("finite field entries"),
            })
            .collect();
        let brute_rank = brute::witt_reduce(fq, &entries).len();
        if brute_rank != entries.len() {
            report.mismatches.push(format!(
                "{}: canonical representative of the Witt component is isotropic",
                x.render()
            ));
        }
        let brute_ord = brute::additive_order(fq, &entries, 16);
        let decided = w.torsion()?;
        match (decided.order, brute_ord) {
            (Order::Finite(a), Some(b)) if a == b => {}
            (a, b) => report.mismatches.push(format!(
                "{}: Witt component order {a} vs isotropy-oracle order {b:?}",
                x.render()
            )),
        }
    }
    Ok(())
}

fn enumerate(field: &FieldSpec, degree: i64, budget: &ScanBudget) -> Result<Vec<MWElt>> {
    match field.kind() {
        FieldKind::Finite(_) => enumerate_finite(field, degree, budget),
        FieldKind::Reals => enumerate_reals(field, degree, budget),
        FieldKind::Complexes => enumerate_complexes(field, degree, budget),
        FieldKind::Rationals => sample_rationals(field, degree, budget),
    }
}

/// The four Witt classes of F_q, as explicit forms.
pub fn finite_witt_classes(field: &FieldSpec) -> Result<Vec<WittClass>> {
    let fq = field.fq().expect("finite field");
    let one = field.one();
    let g = FieldElt::Fin(fq.nonresidue);
    let forms: Vec<Vec<FieldElt>> = vec![
        vec![],
        vec![one.clone()],
        vec![g.clone()],
        if fq.q % 4 == 3 { vec![one.clone(), one.clone()] } else { vec![one.clone(), g] },
    ];
    forms
        .into_iter()
        .map(|entries| DiagonalForm::new(field, &entries)?.witt_class())
        .collect()
}

fn enumerate_finite(field: &FieldSpec, degree: i64, budget: &ScanBudget) -> Result<Vec<MWElt>> {
    let fq = field.fq().expect("finite field");
    let mut out = Vec::new();
    if degree < 0 {
        for w in finite_witt_classes(field)? {
            out.push(MWElt::from_witt(degree, w)?);
        }
    } else if degree == 0 {
        for w in finite_witt_classes(field)? {
            let parity = (w.aniso().rank() % 2) as i64;
            let mut r = -budget.rank_cap;
            while r <= budget.rank_cap {
                if r.rem_euclid(2) == parity {
                    out.push(MWElt::from_gw(GWClass::new(w.clone(), r)?));
                }
                r += 1;
            }
        }
    } else if degree == 1 {
        // complete enumeration: K^M_1 is cyclic of order q - 1 and the
        // degree-one ideal component is determined by parity
        let g = FieldElt::Fin(fq.nonresidue);
        let gsym = MilnorElt::from_symbol(field, &[g.clone()])?;
        let plane = finite_witt_classes(field)?.remove(3);
        for j in 0..(fq.q - 1) as i64 {
            let alpha = gsym.scalar_mul(j)?;
            let witt = if j % 2 == 0 { WittClass::zero(field) } else { plane.clone() };
            out.push(MWElt::pair(degree, alpha, witt)?);
        }
    } else {
        // both K^M_n and I^n vanish
        out.push(MWElt::zero(field, degree)?);
    }
    Ok(out)
}

fn enumerate_reals(field: &FieldSpec, degree: i64, budget: &ScanBudget) -> Result<Vec<MWElt>> {
    let mut out = Vec::new();
    if degree < 0 {
        for m in -budget.rank_cap..=budget.rank_cap {
            out.push(MWElt::from_witt(degree, WittClass::one(field).scalar_mul(m)?)?);
        }
    } else if degree == 0 {
        for m in -budget.rank_cap..=budget.rank_cap {
            let w = WittClass::one(field).scalar_mul(m)?;
            let parity = (w.aniso().rank() % 2) as i64;
            for r in -budget.rank_cap..=budget.rank_cap {
                if r.rem_euclid(2) == parity {
                    out.push(MWElt::from_gw(GWClass::new(w.clone(), r)?));
                }
            }
        }
    } else {
        // I^n(R) is generated by the n-fold lift of {-1}
        let n = degree as usize;
        if n > 8 {
            return Err(Error::Unsupported(
                "real scan degrees above 8 blow up the generator rank".into(),
            ));
        }
        let minus_ones = vec![field.minus_one(); n];
        let pf = pfister_form(field, &minus_ones)?.witt_class()?;
        let sym = MilnorElt::from_symbol(field, &minus_ones)?;
        for m in -2i64..=2 {
            let witt = pf.scalar_mul(m)?;
            for extra in 0..=1i64 {
                let c = m.rem_euclid(2) + 2 * extra;
                let alpha = sym.scalar_mul(c)?;
                out.push(MWElt::pair(degree, alpha, witt.clone())?);
            }
        }
    }
    Ok(out)
}

fn enumerate_complexes(field: &FieldSpec, degree: i64, budget: &ScanBudget) -> Result<Vec<MWElt>> {
    let mut out = Vec::new();
    let classes = vec![WittClass::zero(field), WittClass::one(field)];
    if degree < 0 {
        for w in classes {
            out.push(MWElt::from_witt(degree, w)?);
        }
    } else if degree == 0 {
        for w in classes {
            let parity = (w.aniso().rank() % 2) as i64;
            for r in -budget.rank_cap..=budget.rank_cap {
                if r.rem_euclid(2) == parity {
                    out.push(MWElt::from_gw(GWClass::new(w.clone(), r)?));
                }
            }
        }
    } else if degree == 1 {
        for a in [-2i64, -1, 2, 3] {
            let alpha = MilnorElt::from_symbol(field, &[field.element_from_i64(a)?])?;
            out.push(MWElt::pair(degree, alpha, WittClass::zero(field))?);
        }
        out.push(MWElt::zero(field, degree)?);
    } else {
        out.push(MWElt::zero(field, degree)?);
        // a certified-torsion symbol (contains -1) and a divisible one
        let m1 = field.minus_one();
        let mut entries = vec![m1, field.element_from_i64(3)?];
        entries.extend(std::iter::repeat(field.element_from_i64(5)?).take(degree as usize - 2));
        let torsionish = MilnorElt::from_symbol(field, &entries)?;
        out.push(MWElt::pair(degree, torsionish, WittClass::zero(field))?);
        let mut pos = vec![field.element_from_i64(2)?, field.element_from_i64(3)?];
        pos.extend((0..degree as usize - 2).map(|k| {
            field.element_from_i64(5 + 2 * k as i64).expect("nonzero literal")
        }));
        let divisible = MilnorElt::from_symbol(field, &pos)?;
        out.push(MWElt::pair(degree, divisible, WittClass::zero(field))?);
    }
    Ok(out)
}

fn sample_rationals(field: &FieldSpec, degree: i64, budget: &ScanBudget) -> Result<Vec<MWElt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut out = Vec::new();
    let samples = budget.max_elements.min(64);
    let entry = |rng: &mut ChaCha8Rng| -> i64 {
        loop {
            let v = rng.gen_range(-20i64..=20);
            if v != 0 {
                return v;
            }
        }
    };
    for _ in 0..samples {
        match degree.cmp(&0) {
            std::cmp::Ordering::Less => {
                let rank = rng.gen_range(0..=4usize);
                let entries: Vec<FieldElt> = (0..rank)
                    .map(|_| field.element_from_i64(entry(&mut rng)))
                    .collect::<Result<_>>()?;
                let w = DiagonalForm::new(field, &entries)?.witt_class()?;
                out.push(MWElt::from_witt(degree, w)?);
            }
            std::cmp::Ordering::Equal => {
                let rank = rng.gen_range(0..=4usize);
                let entries: Vec<FieldElt> = (0..rank)
                    .map(|_| field.element_from_i64(entry(&mut rng)))
                    .collect::<Result<_>>()?;
                let base = DiagonalForm::new(field, &entries)?;
                let mut g = GWClass::from_form(&base)?;
                let pad = rng.gen_range(-2i64..=2);
                for _ in 0..pad.unsigned_abs() {
                    let h = GWClass::hyperbolic(field);
                    g = if pad > 0 { g.add(&h)? } else { g.sub(&h)? };
                }
                out.push(MWElt::from_gw(g));
            }
            std::cmp::Ordering::Greater => {
                let n = degree as usize;
                if n > 3 {
                    return Err(Error::Unsupported(
                        "rational samples stay in degrees at most 3, where the \
                         invariant tables are exact"
                            .into(),
                    ));
                }
                let count = rng.gen_range(1..=2usize);
                let mut alpha = MilnorElt::zero(field, degree as u32);
                let mut witt = WittClass::zero(field);
                for _ in 0..count {
                    let entries: Vec<FieldElt> = (0..n)
                        .map(|_| field.element_from_i64(entry(&mut rng)))
                        .collect::<Result<_>>()?;
                    alpha = alpha.add(&MilnorElt::from_symbol(field, &entries)?)?;
                    witt = witt.add(&pfister_form(field, &entries)?.witt_class()?)?;
                }
                // an even Milnor perturbation keeps the pair compatible
                if rng.gen_bool(0.5) {
                    let entries: Vec<FieldElt> = (0..n)
                        .map(|_| field.element_from_i64(entry(&mut rng)))
                        .collect::<Result<_>>()?;
                    let extra = MilnorElt::from_symbol(field, &entries)?.scalar_mul(2)?;
                    alpha = alpha.add(&extra)?;
                }
                out.push(MWElt::pair(degree, alpha, witt)?);
            }
        }
    }
    Ok(out)
}
