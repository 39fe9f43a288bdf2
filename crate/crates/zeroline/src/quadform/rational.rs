//! Witt classification over Q.
//!
//! The anisotropic kernel of a form is computed from its invariants alone:
//! starting from (rank, det, Hasse data, signature) we repeatedly split off a
//! hyperbolic plane while the local isotropy criteria allow it (rank <= 4
//! case analysis at every completion, indefiniteness beyond rank 4), then a
//! deterministic diagonal representative with exactly those invariants is
//! synthesized. Equality of Witt classes is therefore equality of invariants,
//! with no isotropy search anywhere on this path.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{
    hilbert_symbol_classes, is_local_square, rational_class_iter, Place, SquareClass,
};

use super::{hasse_minus_places, DiagonalForm};

/// Candidate entries examined per synthesis slot before giving up. Kernel
/// entries are supported on the primes of the invariants, so real inputs
/// stay far below this.
const SYNTH_CANDIDATES: usize = 40_000;

#[derive(Clone, Debug)]
struct ClassData {
    rank: usize,
    det: SquareClass,
    eps_minus: BTreeSet<Place>,
    sigma: i64,
}

impl ClassData {
    fn support(&self) -> BTreeSet<Place> {
        let mut s: BTreeSet<Place> = self.eps_minus.clone();
        s.insert(Place::Real);
        s.insert(Place::Prime(2));
        let (_, primes) = self.det.rational_parts().expect("Q class");
        for &p in primes {
            s.insert(Place::Prime(p));
        }
        s
    }

    fn eps(&self, v: &Place) -> i8 {
        if self.eps_minus.contains(v) {
            -1
        } else {
            1
        }
    }
}

pub(super) fn witt_kernel(form: &DiagonalForm) -> Result<DiagonalForm> {
    let field = form.field();
    let inv = form.invariants();
    let mut state = ClassData {
        rank: inv.rank,
        det: inv.det,
        eps_minus: inv.hasse_minus,
        sigma: inv.signatures.get(&Place::Real).copied().unwrap_or(0),
    };
    let minus_one = SquareClass::minus_one(field);

    while state.rank >= 2 && is_isotropic(&state)? {
        let new_det = state.det.mul(&minus_one)?;
        // Hasse data of the split complement: eps'_v = eps_v * (-1, det')_v
        let mut support = state.support();
        support.insert(Place::Real);
        let mut new_eps = BTreeSet::new();
        for v in support {
            let twist = hilbert_symbol_classes(&minus_one, &new_det, &v)?;
            if state.eps(&v) * twist == -1 {
                new_eps.insert(v);
            }
        }
        state = ClassData {
            rank: state.rank - 2,
            det: new_det,
            eps_minus: new_eps,
            sigma: state.sigma,
        };
    }

    synthesize(field, &state)
}

/// Local-global isotropy from invariants. Forms of rank at least five are
/// isotropic at every finite completion, so only indefiniteness matters
/// there; ranks two to four use the classical criteria.
fn is_isotropic(c: &ClassData) -> Result<bool> {
    let minus_one = SquareClass::minus_one(&c.det.field().clone());
    match c.rank {
        0 | 1 => Ok(false),
        2 => Ok(c.det == minus_one),
        3 => {
            if c.sigma.abs() > 1 {
                return Ok(false);
            }
            let minus_d = c.det.mul(&minus_one)?;
            for v in c.support() {
                if v == Place::Real {
                    continue;
                }
                if c.eps(&v) != hilbert_symbol_classes(&minus_one, &minus_d, &v)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        4 => {
            if c.sigma.abs() > 2 {
                return Ok(false);
            }
            for v in c.support() {
                if v == Place::Real {
                    continue;
                }
                if is_local_square(&c.det, &v)? {
                    let mm = hilbert_symbol_classes(&minus_one, &minus_one, &v)?;
                    if c.eps(&v) != mm {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
        n => Ok(c.sigma.unsigned_abs() as usize <= n - 2),
    }
}

/// Whether a form over Q with the given invariants exists. Used to prune the
/// recursive entry search; the pruning is exact so every entered branch
/// terminates with a representative.
fn is_feasible(c: &ClassData) -> Result<bool> {
    let n = c.rank as i64;
    if c.sigma.abs() > n || (c.sigma - n).rem_euclid(2) != 0 {
        return Ok(false);
    }
    // coherence at the real place
    let negatives = (n - c.sigma) / 2;
    if c.det.is_negative() != (negatives % 2 == 1) {
        return Ok(false);
    }
    let eps_real = (negatives * (negatives - 1) / 2) % 2 == 1;
    if c.eps_minus.contains(&Place::Real) != eps_real {
        return Ok(false);
    }
    // product formula
    if c.eps_minus.len() % 2 != 0 {
        return Ok(false);
    }
    // low-rank local constraints
    match c.rank {
        0 => Ok(c.eps_minus.is_empty() && c.det.is_one() && c.sigma == 0),
        1 => Ok(c.eps_minus.is_empty()),
        2 => {
            let minus_one = SquareClass::minus_one(c.det.field());
            let minus_d = c.det.mul(&minus_one)?;
            for v in &c.eps_minus {
                if *v == Place::Real {
                    continue;
                }
                if is_local_square(&minus_d, v)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Ok(true),
    }
}

// Indefinite anisotropic kernels have rank at most four, but definite ones
// can be arbitrarily large (|sigma| = rank); the recursive peeling below
// handles both.
fn synthesize(field: &crate::field::FieldSpec, c: &ClassData) -> Result<DiagonalForm> {
    if !is_feasible(c)? {
        return Err(Error::Internal(format!(
            "inconsistent invariants: rank {}, det {}, sigma {}",
            c.rank,
            c.det.render(),
            c.sigma
        )));
    }
    let entries = synthesize_entries(c)?;
    let form = DiagonalForm::from_classes(field, entries)?;
    // exact cross-check: the synthesized representative must reproduce the
    // target invariants
    let inv = form.invariants();
    if inv.det != c.det
        || inv.hasse_minus != c.eps_minus
        || inv.signatures.get(&Place::Real).copied().unwrap_or(0) != c.sigma
    {
        return Err(Error::Internal("synthesized representative mismatch".into()));
    }
    Ok(form)
}

fn synthesize_entries(c: &ClassData) -> Result<Vec<SquareClass>> {
    // Kernels of rank at least five are definite, and a definite form of
    // rank five or more represents its sign (adjoining <-sign> gives an
    // indefinite form of rank at least six, which is isotropic). Peel unit
    // entries iteratively down to rank four, then search the small tail.
    let mut prefix: Vec<SquareClass> = Vec::new();
    let mut cur = c.clone();
    while cur.rank >= 5 {
        if cur.sigma.unsigned_abs() as usize != cur.rank {
            return Err(Error::Internal(
                "a high-rank anisotropic state must be definite".into(),
            ));
        }
        let field = cur.det.field().clone();
        let a = if cur.sigma > 0 {
            SquareClass::one(&field)
        } else {
            SquareClass::minus_one(&field)
        };
        let rest_sigma = cur.sigma - sign_of(&a);
        cur = peel(&cur, &a, rest_sigma)?;
        prefix.push(a);
    }
    let tail = synthesize_small(&cur)?;
    prefix.extend(tail);
    Ok(prefix)
}

fn synthesize_small(c: &ClassData) -> Result<Vec<SquareClass>> {
    match c.rank {
        0 => Ok(Vec::new()),
        1 => Ok(vec![c.det.clone()]),
        2 => {
            for a in rational_class_iter().take(SYNTH_CANDIDATES) {
                let b = a.mul(&c.det)?;
                let sig = sign_of(&a) + sign_of(&b);
                if sig != c.sigma {
                    continue;
                }
                if binary_matches(&a, &b, c)? {
                    return Ok(vec![a, b]);
                }
            }
            Err(Error::Internal("binary representative search exhausted".into()))
        }
        r => {
            for a in rational_class_iter().take(SYNTH_CANDIDATES) {
                let rest_sigma = c.sigma - sign_of(&a);
                if rest_sigma.unsigned_abs() as usize > r - 1 {
                    continue;
                }
                let rest = peel(c, &a, rest_sigma)?;
                if !is_feasible(&rest)? {
                    continue;
                }
                if let Ok(mut tail) = synthesize_small(&rest) {
                    let mut entries = vec![a];
                    entries.append(&mut tail);
                    return Ok(entries);
                }
            }
            Err(Error::Internal("representative search exhausted".into()))
        }
    }
}

/// Invariants of the orthogonal complement of <a> inside a form with
/// invariants `c`: det' = det * a and eps'_v = eps_v * (a, det')_v.
fn peel(c: &ClassData, a: &SquareClass, rest_sigma: i64) -> Result<ClassData> {
    let new_det = c.det.mul(a)?;
    let mut support = c.support();
    let (_, primes) = a.rational_parts()?;
    for &p in primes {
        support.insert(Place::Prime(p));
    }
    let mut eps = BTreeSet::new();
    for v in support {
        if c.eps(&v) * hilbert_symbol_classes(a, &new_det, &v)? == -1 {
            eps.insert(v);
        }
    }
    Ok(ClassData { rank: c.rank - 1, det: new_det, eps_minus: eps, sigma: rest_sigma })
}

fn binary_matches(a: &SquareClass, b: &SquareClass, c: &ClassData) -> Result<bool> {
    let entries = [a.clone(), b.clone()];
    Ok(hasse_minus_places(&entries) == c.eps_minus)
}

fn sign_of(a: &SquareClass) -> i64 {
    if a.is_negative() {
        -1
    } else {
        1
    }
}
