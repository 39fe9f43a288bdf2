//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line.
//! Everything is exact arithmetic; the stated runtime bounds are asserted.
//!
//! Run with:  cargo test -p zeroline --test acceptance -- --nocapture

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zeroline::etalocal::{self, BiDeg, EtaLocalElt, Mono, SIGMA_DEG};
use zeroline::field::{FieldElt, FieldSpec};
use zeroline::milnor::MilnorElt;
use zeroline::milnorwitt::MWElt;
use zeroline::powerops;
use zeroline::quadform::{brute, DiagonalForm, GWClass, WittClass};
use zeroline::verdict::Order;

fn nonzero(rng: &mut ChaCha8Rng, bound: i64) -> i64 {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return v;
        }
    }
}

#[test]
fn acceptance_1_window_comparison() {
    let start = Instant::now();
    let report = etalocal::verify_window((-50, 50), (-50, 50)).unwrap();
    assert!(report.surjective_everywhere, "unit map fails to surject somewhere");
    assert!(report.shift_match, "kernel dimensions do not match the (7,4) shift");
    for cell in &report.cells {
        assert_eq!(cell.image_dim, cell.target_dim, "at {}", cell.bidegree);
        assert_eq!(
            cell.kernel_dim,
            etalocal::kt_dim(cell.bidegree - SIGMA_DEG),
            "at {}",
            cell.bidegree
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "window verification took {elapsed:?}");
    println!(
        "ACCEPTANCE 1 [unit-map window at +/-50]: PASS ({} bidegrees, {:?})",
        report.cells.len(),
        elapsed
    );
}

#[test]
fn acceptance_2_localized_ring_structure() {
    // dimension identity over the same window
    for stem in -50..=50i64 {
        for weight in -50..=50i64 {
            let d = BiDeg::new(stem, weight);
            assert_eq!(
                etalocal::r_dim(d, true),
                etalocal::kt_dim(d) + etalocal::kt_dim(d - SIGMA_DEG),
                "dimension split fails at {d}"
            );
        }
    }
    // relation suite, exact
    let eta = EtaLocalElt::from_monos(vec![Mono { eta: 1, sigma: 0, mu: 0 }], false).unwrap();
    let sigma = EtaLocalElt::from_monos(vec![Mono { eta: 0, sigma: 1, mu: 0 }], false).unwrap();
    let sigma_sq = sigma.mul(&sigma).unwrap();
    assert!(sigma_sq.is_zero(), "sigma^2 must vanish");
    assert!(eta.mul(&sigma_sq).unwrap().is_zero(), "eta sigma^2 must vanish");
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0002);
    for _ in 0..200 {
        let monos: Vec<Mono> = (0..rng.gen_range(0..5))
            .map(|_| Mono {
                eta: rng.gen_range(-10i64..=10),
                sigma: rng.gen_range(0..=1),
                mu: rng.gen_range(-5i64..=5),
            })
            .collect();
        let x = EtaLocalElt::from_monos(monos, true).unwrap();
        assert!(x.add(&x).unwrap().is_zero(), "2x must vanish");
    }
    println!("ACCEPTANCE 2 [localized ring structure]: PASS (dimension split and relations)");
}

#[test]
fn acceptance_3_finite_field_exhaustive() {
    let start = Instant::now();
    let mut checked = 0usize;
    for q in [3u64, 5, 7, 9, 11, 13] {
        let field = FieldSpec::finite(q).unwrap();
        let fq = field.fq().unwrap();
        let g = fq.nonresidue;
        // memoized brute outcomes, keyed by the sorted entry multiset
        let mut brute_orders: BTreeMap<Vec<u64>, Option<u64>> = BTreeMap::new();
        let mut brute_exps: BTreeMap<Vec<u64>, Option<u32>> = BTreeMap::new();
        for rank in 0..=8usize {
            for mask in 0..(1u32 << rank) {
                let entries: Vec<u64> =
                    (0..rank).map(|i| if mask >> i & 1 == 1 { g } else { 1 }).collect();
                let elts: Vec<FieldElt> = entries.iter().map(|&e| FieldElt::Fin(e)).collect();
                let form = DiagonalForm::new(&field, &elts).unwrap();
                let w = form.witt_class().unwrap();
                let t = w.torsion().unwrap();
                let nil = w.nilpotence(64).unwrap();

                let mut key = entries.clone();
                key.sort_unstable();
                let b_order = *brute_orders
                    .entry(key.clone())
                    .or_insert_with(|| brute::additive_order(fq, &entries, 16));
                let b_exp = *brute_exps
                    .entry(key)
                    .or_insert_with(|| brute::nilpotence_exponent(fq, &entries, 8));

                assert!(t.torsion, "W(F_{q}) is torsion");
                let Order::Finite(order) = t.order else { panic!("finite order expected") };
                assert_eq!(Some(order), b_order, "q = {q}, entries {entries:?}");
                assert!(order.is_power_of_two(), "q = {q}, entries {entries:?}");
                assert_eq!(nil.exponent, b_exp, "q = {q}, entries {entries:?}");
                assert_eq!(nil.nilpotent, b_exp.is_some(), "q = {q}, entries {entries:?}");
                if w.rank_parity_even() {
                    assert!(nil.nilpotent, "even-rank torsion must be nilpotent: {entries:?}");
                    assert!(nil.exponent.unwrap() <= 2, "exponent above two: {entries:?}");
                }
                checked += 1;
            }
        }
        // the unit class is odd-rank torsion and never nilpotent
        let one = WittClass::one(&field);
        assert!(one.torsion().unwrap().torsion);
        assert!(!one.nilpotence(64).unwrap().nilpotent);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "exhaustive check took {elapsed:?}");
    println!(
        "ACCEPTANCE 3 [finite-field torsion and nilpotence, exhaustive rank <= 8]: \
         PASS ({checked} forms, {elapsed:?})"
    );
}

#[test]
fn acceptance_4_signature_torsion_criterion() {
    let q = FieldSpec::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0004);
    let mut produced = 0usize;
    while produced < 200 {
        let rank = rng.gen_range(1..=6usize);
        let entries: Vec<i64> = (0..rank)
            .map(|_| loop {
                let v = nonzero(&mut rng, 50);
                // squarefree entries only
                let mag = v.unsigned_abs();
                let squarefree = (2..=7u64).all(|d| mag % (d * d) != 0);
                if squarefree {
                    break v;
                }
            })
            .collect();
        let elts: Vec<FieldElt> =
            entries.iter().map(|&x| q.element_from_i64(x).unwrap()).collect();
        let form = DiagonalForm::new(&q, &elts).unwrap();
        let w = form.witt_class().unwrap();
        // route one: the torsion decision
        let t = w.torsion().unwrap();
        // route two: the total signature, straight off the entries
        let sig_zero = form.signature() == Some(0);
        // route three: 4 phi reduced through the invariant classification
        let four = form
            .orth_sum(&form)
            .unwrap()
            .orth_sum(&form)
            .unwrap()
            .orth_sum(&form)
            .unwrap()
            .witt_class()
            .unwrap();
        assert_eq!(t.torsion, sig_zero, "{entries:?}");
        assert_eq!(t.torsion, four.is_zero(), "{entries:?}");
        produced += 1;
    }
    println!("ACCEPTANCE 4 [signature torsion criterion over Q]: PASS (200 forms, 3 routes)");
}

#[test]
fn acceptance_5_power_factorization_suite() {
    let q = FieldSpec::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce_0005);
    let minus_one = MilnorElt::from_symbol(&q, &[q.minus_one()]).unwrap();
    for _ in 0..50 {
        let k = rng.gen_range(1..=3usize);
        let mut alpha = MilnorElt::zero(&q, 1);
        for _ in 0..k {
            let entry = q.element_from_i64(nonzero(&mut rng, 30)).unwrap();
            let sym = MilnorElt::from_symbol(&q, &[entry]).unwrap();
            alpha = alpha.add(&sym).unwrap();
        }
        let (m, gamma) = alpha.power_form().unwrap();
        assert!(m as usize <= k + 1, "m = {m} exceeds k + 1 = {}", k + 1);
        let diff = alpha
            .pow(m)
            .unwrap()
            .sub(&minus_one.mul(&gamma).unwrap())
            .unwrap();
        assert!(diff.is_zero().unwrap(), "factorization identity failed");
        // whenever some power is certified even, the combined power dies
        let mut even_k = None;
        for e in 1..=4u32 {
            if alpha.pow(e).unwrap().mod2_form().unwrap().is_zero() {
                even_k = Some(e);
                break;
            }
        }
        if let Some(e) = even_k {
            let vanishing = alpha.pow(m + e).unwrap();
            assert!(
                vanishing.is_zero().unwrap(),
                "alpha^(m+k) should vanish exactly via 2{{-1}} = 0"
            );
        }
    }
    println!("ACCEPTANCE 5 [power factorization and integral vanishing]: PASS (50 samples)");
}

#[test]
fn acceptance_6_binomial_and_bidegree_arithmetic() {
    for p in [2u64, 3, 5, 7] {
        for i in 1..=8u32 {
            for v in 1..=20u64 {
                if v % p == 0 {
                    continue;
                }
                let r = powerops::binom_valuation(p, i, v).unwrap();
                assert!(
                    r.satisfies_bound,
                    "valuation bound fails at p = {p}, i = {i}, v = {v}"
                );
            }
        }
    }
    let b = powerops::exponent_bound(powerops::TorsionHypothesis::new(2, 1, 4).unwrap());
    assert_eq!(b.exponent, num_bigint::BigUint::from(13u32));
    let r = powerops::kp_bidegrees(powerops::KPInstance { p: 2, q: 4, w: 1, s: 1, t: 1 });
    assert_eq!(r.map_bidegree, BiDeg::new(9, 3));
    assert_eq!(r.target_sphere, BiDeg::new(8, 2));
    let r = powerops::kp_bidegrees(powerops::KPInstance { p: 2, q: 576, w: 320, s: 9, t: 5 });
    assert_eq!(r.map_bidegree, BiDeg::new(1161, 645));
    assert_eq!(r.target_sphere, BiDeg::new(1152, 640));
    println!("ACCEPTANCE 6 [valuation bounds and bidegree bookkeeping]: PASS");
}

#[test]
fn acceptance_7_eta_dossier() {
    let fields: Vec<FieldSpec> = vec![
        FieldSpec::rationals(),
        FieldSpec::reals(),
        FieldSpec::complexes(),
        FieldSpec::finite(3).unwrap(),
        FieldSpec::finite(5).unwrap(),
        FieldSpec::finite(7).unwrap(),
        FieldSpec::finite(9).unwrap(),
        FieldSpec::finite(11).unwrap(),
        FieldSpec::finite(13).unwrap(),
    ];
    let mut failures: Vec<String> = Vec::new();

    for field in &fields {
        // (1 - eps) eta = 0
        let one = GWClass::one(field);
        let eps = GWClass::epsilon(field);
        let h = one.sub(&eps).unwrap();
        let killed = MWElt::from_gw(h).mul(&MWElt::eta(field)).unwrap().value;
        if !killed.is_zero().unwrap() {
            failures.push(format!("(1 - eps) eta != 0 over {field}"));
        }
        // eps^2 = 1
        let eps_sq = GWClass::epsilon(field).mul(&GWClass::epsilon(field)).unwrap();
        if eps_sq != GWClass::one(field) {
            failures.push(format!("eps^2 != 1 over {field}"));
        }
        // eta^n != 0 for n <= 64
        let eta = MWElt::eta(field);
        let mut power = eta.clone();
        for n in 2..=64u32 {
            power = power.mul(&eta).unwrap().value;
            if power.is_zero().unwrap() {
                failures.push(format!("eta^{n} = 0 over {field}"));
                break;
            }
        }
        // 2 eta = 0 exactly over the non-real supported fields
        let two_eta = MWElt::eta(field).scalar_mul(2).unwrap();
        let vanishes = two_eta.is_zero().unwrap();
        let expected = !field.is_formally_real();
        if vanishes != expected {
            let t = MWElt::eta(field).torsion().unwrap();
            failures.push(format!(
                "2 eta = 0 expected {expected}, found {vanishes} over {field} \
                 (eta has additive order {})",
                t.order
            ));
        }
    }

    // {-1}^n stays nonzero in the mod-two ring of R up to degree 32
    let r = FieldSpec::reals();
    let m1 = MilnorElt::from_symbol(&r, &[r.minus_one()]).unwrap();
    let mut power = m1.clone();
    for n in 2..=32u32 {
        power = power.mul(&m1).unwrap();
        if power.mod2_form().unwrap().is_zero() {
            failures.push(format!("{{-1}}^{n} = 0 mod two over R"));
            break;
        }
    }

    if failures.is_empty() {
        println!("ACCEPTANCE 7 [eta dossier]: PASS");
    } else {
        println!("ACCEPTANCE 7 [eta dossier]: FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!(
            "eta dossier has {} failing clause(s); the 2-eta clause cannot hold over \
             F_q with q = 3 mod 4, where the Witt ring is cyclic of order four and \
             eta has additive order four",
            failures.len()
        );
    }
}

#[test]
fn acceptance_8_gw_fiber_product() {
    for q in [3u64, 5, 7, 9, 11, 13] {
        let field = FieldSpec::finite(q).unwrap();
        let classes = zeroline::milnorwitt::scan::finite_witt_classes(&field).unwrap();
        assert_eq!(classes.len(), 4);
        // build every fiber-product point with |rank| <= 8 from an actual
        // form plus hyperbolic padding, and check the map is a bijection
        let mut seen: BTreeSet<(String, i64)> = BTreeSet::new();
        let mut gw_elts: Vec<GWClass> = Vec::new();
        let h = GWClass::hyperbolic(&field);
        for w in &classes {
            let parity = (w.aniso().rank() % 2) as i64;
            for r in -8i64..=8 {
                if r.rem_euclid(2) != parity {
                    continue;
                }
                let base = GWClass::from_form(w.aniso()).unwrap();
                let defect = r - w.aniso().rank() as i64;
                assert_eq!(defect.rem_euclid(2), 0);
                let mut g = base;
                for _ in 0..(defect / 2).unsigned_abs() {
                    g = if defect > 0 { g.add(&h).unwrap() } else { g.sub(&h).unwrap() };
                }
                assert_eq!(g.rank(), r);
                assert_eq!(g.witt(), w, "padding must not move the Witt part");
                let key = (format!("{}", g.witt().aniso()), g.rank());
                assert!(seen.insert(key), "fiber point hit twice: q = {q}, rank {r}");
                gw_elts.push(g);
            }
        }
        assert_eq!(seen.len(), 2 * 9 + 2 * 8, "q = {q}");
        // ring structure is componentwise on (witt, rank)
        for a in &gw_elts {
            for b in &gw_elts {
                let sum = a.add(b).unwrap();
                assert_eq!(sum.witt(), &a.witt().add(b.witt()).unwrap());
                assert_eq!(sum.rank(), a.rank() + b.rank());
                let prod = a.mul(b).unwrap();
                assert_eq!(prod.witt(), &a.witt().mul(b.witt()).unwrap());
                assert_eq!(prod.rank(), a.rank() * b.rank());
            }
        }
    }
    println!("ACCEPTANCE 8 [GW is the fiber product of W and Z over Z/2]: PASS (q in {{3,5,7,9,11,13}})");
}
