//! The bigraded F_2-algebra F_2[eta^{±1}, sigma, mu9]/(eta sigma^2), its
//! mu9-localization, the bigraded homotopy ring of Witt theory over C, and
//! the window verification of the comparison map between them.
//!
//! Generators sit in bidegrees eta = (1, 1), sigma = (7, 4), mu9 = (9, 5).
//! With eta invertible the relation eta sigma^2 = 0 forces sigma^2 = 0, so a
//! monomial basis is eta^a mu9^b and eta^a mu9^b sigma. The Witt-theory ring
//! is one copy of Z/2 in every bidegree (a, b) with a congruent to b mod 4,
//! periodic under (4, 0) and (1, 1).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// A bidegree (stem, weight).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BiDeg {
    pub stem: i64,
    pub weight: i64,
}

impl BiDeg {
    pub fn new(stem: i64, weight: i64) -> BiDeg {
        BiDeg { stem, weight }
    }
}

impl Add for BiDeg {
    type Output = BiDeg;
    fn add(self, rhs: BiDeg) -> BiDeg {
        BiDeg { stem: self.stem + rhs.stem, weight: self.weight + rhs.weight }
    }
}

impl Sub for BiDeg {
    type Output = BiDeg;
    fn sub(self, rhs: BiDeg) -> BiDeg {
        BiDeg { stem: self.stem - rhs.stem, weight: self.weight - rhs.weight }
    }
}

impl fmt::Display for BiDeg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.stem, self.weight)
    }
}

pub const ETA_DEG: BiDeg = BiDeg { stem: 1, weight: 1 };
pub const SIGMA_DEG: BiDeg = BiDeg { stem: 7, weight: 4 };
pub const MU9_DEG: BiDeg = BiDeg { stem: 9, weight: 5 };

/// A monomial eta^eta_exp * sigma^sigma_exp * mu9^mu_exp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub eta: i64,
    pub sigma: u32,
    pub mu: i64,
}

impl Mono {
    pub fn bidegree(&self) -> BiDeg {
        BiDeg {
            stem: self.eta + 7 * self.sigma as i64 + 9 * self.mu,
            weight: self.eta + 4 * self.sigma as i64 + 5 * self.mu,
        }
    }
}

/// An element of the eta-inverted ring: an F_2 set of monomials. `localized`
/// records whether mu9 has been inverted (negative mu exponents allowed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaLocalElt {
    monos: BTreeSet<Mono>,
    localized: bool,
}

impl EtaLocalElt {
    pub fn zero(localized: bool) -> EtaLocalElt {
        EtaLocalElt { monos: BTreeSet::new(), localized }
    }

    pub fn one(localized: bool) -> EtaLocalElt {
        EtaLocalElt::from_monos(vec![Mono { eta: 0, sigma: 0, mu: 0 }], localized)
            .expect("unit monomial")
    }

    /// Build from raw monomials and put in normal form: sigma exponents of
    /// two or more die (eta is invertible and eta sigma^2 = 0), duplicate
    /// monomials cancel in characteristic two.
    pub fn from_monos(monos: Vec<Mono>, localized: bool) -> Result<EtaLocalElt> {
        let mut set = BTreeSet::new();
        for m in monos {
            if !localized && m.mu < 0 {
                return Err(Error::InvalidInput(
                    "negative mu9 exponent without localization".into(),
                ));
            }
            if m.sigma >= 2 {
                continue;
            }
            if !set.insert(m) {
                set.remove(&m);
            }
        }
        Ok(EtaLocalElt { monos: set, localized })
    }

    pub fn monos(&self) -> impl Iterator<Item = &Mono> {
        self.monos.iter()
    }

    pub fn localized(&self) -> bool {
        self.localized
    }

    pub fn is_zero(&self) -> bool {
        self.monos.is_empty()
    }

    /// Idempotent normal form (already maintained; re-applies the rules).
    pub fn normal_form(&self) -> Result<EtaLocalElt> {
        EtaLocalElt::from_monos(self.monos.iter().copied().collect(), self.localized)
    }

    pub fn add(&self, other: &EtaLocalElt) -> Result<EtaLocalElt> {
        let mut monos: Vec<Mono> = self.monos.iter().copied().collect();
        monos.extend(other.monos.iter().copied());
        EtaLocalElt::from_monos(monos, self.localized || other.localized)
    }

    pub fn mul(&self, other: &EtaLocalElt) -> Result<EtaLocalElt> {
        let mut monos = Vec::with_capacity(self.monos.len() * other.monos.len());
        for a in &self.monos {
            for b in &other.monos {
                monos.push(Mono {
                    eta: a.eta + b.eta,
                    sigma: a.sigma + b.sigma,
                    mu: a.mu + b.mu,
                });
            }
        }
        EtaLocalElt::from_monos(monos, self.localized || other.localized)
    }

    pub fn pow(&self, e: u32) -> Result<EtaLocalElt> {
        let mut acc = EtaLocalElt::one(self.localized);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn render(&self) -> String {
        if self.monos.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .monos
            .iter()
            .map(|m| {
                let mut factors: Vec<String> = Vec::new();
                if m.eta != 0 {
                    factors.push(if m.eta == 1 { "eta".into() } else { format!("eta^{}", m.eta) });
                }
                if m.sigma != 0 {
                    factors.push("sigma".into());
                }
                if m.mu != 0 {
                    factors.push(if m.mu == 1 { "mu9".into() } else { format!("mu9^{}", m.mu) });
                }
                if factors.is_empty() {
                    "1".into()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for EtaLocalElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// Monomial basis dimension in a bidegree. Solving
/// a*(1,1) + e*(7,4) + b*(9,5) = d for e in {0, 1} leaves 3e + 4b =
/// stem - weight, so at most two basis monomials exist per bidegree.
pub fn r_dim(d: BiDeg, invert_mu9: bool) -> usize {
    let mut count = 0;
    for e in 0..=1i64 {
        let rhs = d.stem - d.weight - 3 * e;
        if rhs.rem_euclid(4) != 0 {
            continue;
        }
        let b = rhs / 4;
        if !invert_mu9 && b < 0 {
            continue;
        }
        count += 1;
    }
    count
}

/// The basis monomials themselves, in the same order.
pub fn r_basis(d: BiDeg, invert_mu9: bool) -> Vec<Mono> {
    let mut out = Vec::new();
    for e in 0..=1i64 {
        let rhs = d.stem - d.weight - 3 * e;
        if rhs.rem_euclid(4) != 0 {
            continue;
        }
        let b = rhs / 4;
        if !invert_mu9 && b < 0 {
            continue;
        }
        let a = d.stem - 7 * e - 9 * b;
        let m = Mono { eta: a, sigma: e as u32, mu: b };
        debug_assert_eq!(m.bidegree(), d);
        out.push(m);
    }
    out
}

/// Dimension of the Witt-theory ring over C in a bidegree: one copy of Z/2
/// exactly when stem = weight mod 4 (the lattice spanned by the (4,0) and
/// (1,1) periodicities).
pub fn kt_dim(d: BiDeg) -> usize {
    usize::from((d.stem - d.weight).rem_euclid(4) == 0)
}

/// An element of the bigraded Witt-theory ring over C: a set of bidegrees
/// carrying the nonzero Z/2 coordinate.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KTElt {
    bits: BTreeSet<BiDeg>,
}

impl KTElt {
    pub fn zero() -> KTElt {
        KTElt::default()
    }

    pub fn generator(d: BiDeg) -> Result<KTElt> {
        if kt_dim(d) == 0 {
            return Err(Error::InvalidInput(format!(
                "the Witt-theory ring vanishes in bidegree {d}"
            )));
        }
        let mut bits = BTreeSet::new();
        bits.insert(d);
        Ok(KTElt { bits })
    }

    pub fn bits(&self) -> impl Iterator<Item = &BiDeg> {
        self.bits.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn add(&self, other: &KTElt) -> KTElt {
        let mut bits = self.bits.clone();
        for d in &other.bits {
            if !bits.insert(*d) {
                bits.remove(d);
            }
        }
        KTElt { bits }
    }

    pub fn mul(&self, other: &KTElt) -> KTElt {
        let mut out = KTElt::zero();
        for a in &self.bits {
            for b in &other.bits {
                let d = *a + *b;
                debug_assert_eq!(kt_dim(d), 1);
                if !out.bits.insert(d) {
                    out.bits.remove(&d);
                }
            }
        }
        out
    }
}

/// The unit-induced ring map: eta and mu9 go to the periodicity generators,
/// sigma goes to zero, so a sigma-free monomial hits the generator of its
/// own bidegree (always on the lattice) and everything else dies.
pub fn unit_map(x: &EtaLocalElt) -> Result<KTElt> {
    if !x.localized {
        return Err(Error::InvalidInput(
            "the comparison map needs mu9 inverted; localize the element first".into(),
        ));
    }
    let mut out = KTElt::zero();
    for m in &x.monos {
        if m.sigma != 0 {
            continue;
        }
        let d = m.bidegree();
        debug_assert_eq!(kt_dim(d), 1, "sigma-free monomials land on the lattice");
        if !out.bits.insert(d) {
            out.bits.remove(&d);
        }
    }
    Ok(out)
}

/// Per-bidegree data of the window verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowCell {
    pub bidegree: BiDeg,
    pub source_dim: usize,
    pub target_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub expected_kernel_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowReport {
    pub stem_range: (i64, i64),
    pub weight_range: (i64, i64),
    pub surjective_everywhere: bool,
    pub shift_match: bool,
    pub cells: Vec<WindowCell>,
}

/// Exact F_2 verification over a rectangular window: in every bidegree the
/// map is onto the Witt-theory group and its kernel has the dimension of the
/// Witt-theory group shifted by (7, 4).
pub fn verify_window(
    stem_range: (i64, i64),
    weight_range: (i64, i64),
) -> Result<WindowReport> {
    if stem_range.0 > stem_range.1 || weight_range.0 > weight_range.1 {
        return Ok(WindowReport {
            stem_range,
            weight_range,
            surjective_everywhere: true,
            shift_match: true,
            cells: Vec::new(),
        });
    }
    let mut cells = Vec::new();
    let mut surjective = true;
    let mut shift = true;
    for stem in stem_range.0..=stem_range.1 {
        for weight in weight_range.0..=weight_range.1 {
            let d = BiDeg::new(stem, weight);
            let basis = r_basis(d, true);
            let source_dim = basis.len();
            let target_dim = kt_dim(d);
            // rank over F_2 of a map into a space of dimension <= 1: one if
            // any basis vector has nonzero image
            let mut image_dim = 0;
            for m in &basis {
                let elt = EtaLocalElt::from_monos(vec![*m], true)?;
                if !unit_map(&elt)?.is_zero() {
                    image_dim = 1;
                    break;
                }
            }
            let kernel_dim = source_dim - image_dim;
            let expected_kernel_dim = kt_dim(d - SIGMA_DEG);
            if image_dim < target_dim {
                surjective = false;
            }
            if kernel_dim != expected_kernel_dim {
                shift = false;
            }
            cells.push(WindowCell {
                bidegree: d,
                source_dim,
                target_dim,
                image_dim,
                kernel_dim,
                expected_kernel_dim,
            });
        }
    }
    Ok(WindowReport {
        stem_range,
        weight_range,
        surjective_everywhere: surjective,
        shift_match: shift,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_match_the_monomial_basis() {
        assert_eq!(r_dim(BiDeg::new(0, 0), false), 1);
        assert_eq!(r_dim(BiDeg::new(9, 5), false), 1);
        assert_eq!(r_dim(BiDeg::new(14, 8), false), 0);
        // sigma itself
        assert_eq!(r_dim(BiDeg::new(7, 4), false), 1);
        // without localization mu9^{-1} is gone
        assert_eq!(r_dim(BiDeg::new(-9, -5), false), 0);
        assert_eq!(r_dim(BiDeg::new(-9, -5), true), 1);
    }

    #[test]
    fn kt_dims() {
        assert_eq!(kt_dim(BiDeg::new(0, 0)), 1);
        assert_eq!(kt_dim(BiDeg::new(9, 5)), 1);
        assert_eq!(kt_dim(BiDeg::new(7, 4)), 0);
        assert_eq!(kt_dim(BiDeg::new(4, 0)), 1);
        assert_eq!(kt_dim(BiDeg::new(1, 1)), 1);
    }

    #[test]
    fn sigma_squares_to_zero_and_eta_inverts() {
        let sigma = EtaLocalElt::from_monos(vec![Mono { eta: 0, sigma: 1, mu: 0 }], false).unwrap();
        assert!(sigma.mul(&sigma).unwrap().is_zero());
        let eta = EtaLocalElt::from_monos(vec![Mono { eta: 1, sigma: 0, mu: 0 }], false).unwrap();
        let eta_inv =
            EtaLocalElt::from_monos(vec![Mono { eta: -1, sigma: 0, mu: 0 }], false).unwrap();
        assert_eq!(eta.mul(&eta_inv).unwrap(), EtaLocalElt::one(false));
        let x = eta.add(&sigma).unwrap();
        assert!(x.add(&x).unwrap().is_zero());
    }

    #[test]
    fn unit_map_examples() {
        let one = EtaLocalElt::one(true);
        assert_eq!(unit_map(&one).unwrap(), KTElt::generator(BiDeg::new(0, 0)).unwrap());
        let sigma = EtaLocalElt::from_monos(vec![Mono { eta: 0, sigma: 1, mu: 0 }], true).unwrap();
        assert!(unit_map(&sigma).unwrap().is_zero());
        let eta4 = EtaLocalElt::from_monos(vec![Mono { eta: 4, sigma: 0, mu: 0 }], true).unwrap();
        assert_eq!(unit_map(&eta4).unwrap(), KTElt::generator(BiDeg::new(4, 4)).unwrap());
    }

    #[test]
    fn window_checks_pass_and_catch_the_sigma_kernel() {
        let report = verify_window((-20, 20), (-20, 20)).unwrap();
        assert!(report.surjective_everywhere);
        assert!(report.shift_match);
        // sigma * mu9 sits in (16, 9) and spans the kernel there
        let cell = report
            .cells
            .iter()
            .find(|c| c.bidegree == BiDeg::new(16, 9))
            .unwrap();
        assert_eq!(cell.kernel_dim, 1);
        assert_eq!(kt_dim(BiDeg::new(9, 5)), 1);
        // empty window passes vacuously
        let empty = verify_window((5, 4), (0, 0)).unwrap();
        assert!(empty.surjective_everywhere && empty.shift_match);
        assert!(empty.cells.is_empty());
    }

    #[test]
    fn unit_map_is_a_ring_map_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0003);
        for _ in 0..500 {
            let rand_elt = |rng: &mut rand_chacha::ChaCha8Rng| {
                let n = rng.gen_range(0..4);
                let monos: Vec<Mono> = (0..n)
                    .map(|_| Mono {
                        eta: rng.gen_range(-6i64..=6),
                        sigma: rng.gen_range(0..=1),
                        mu: rng.gen_range(-3i64..=3),
                    })
                    .collect();
                EtaLocalElt::from_monos(monos, true).unwrap()
            };
            let x = rand_elt(&mut rng);
            let y = rand_elt(&mut rng);
            let fx = unit_map(&x).unwrap();
            let fy = unit_map(&y).unwrap();
            assert_eq!(unit_map(&x.mul(&y).unwrap()).unwrap(), fx.mul(&fy));
            assert_eq!(unit_map(&x.add(&y).unwrap()).unwrap(), fx.add(&fy));
        }
    }

    #[test]
    fn localized_dims_split_into_two_shifted_copies() {
        for stem in -20..=20i64 {
            for weight in -20..=20i64 {
                let d = BiDeg::new(stem, weight);
                assert_eq!(
                    r_dim(d, true),
                    kt_dim(d) + kt_dim(d - SIGMA_DEG),
                    "bidegree {d}"
                );
            }
        }
    }

    #[test]
    fn eta_and_mu9_multiplication_are_bijections_on_dimensions() {
        for stem in -15..=15i64 {
            for weight in -15..=15i64 {
                let d = BiDeg::new(stem, weight);
                assert_eq!(r_dim(d, true), r_dim(d + ETA_DEG, true));
                assert_eq!(r_dim(d, true), r_dim(d + MU9_DEG, true));
            }
        }
    }
}
