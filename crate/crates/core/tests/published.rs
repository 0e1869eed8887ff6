//! Checks against the published solution families and their worked numbers.

use dopt_core::catalog::{catalog_lookup, explicit_entries, CatalogEntry};
use dopt_core::constraints::{
    applicable_corollaries, corollary_check, divisor_sums_all, sine_identity_check, strided_sums,
    Corollary,
};
use dopt_core::numtheory::{divisors, OrbitSystem};
use dopt_core::search::{encode_fingerprint, SearchSpace, Side};
use dopt_core::seqcore::{psd, psd_at, psd_tolerance};
use dopt_core::verify::{verify_matrix_equation, verify_sds};
use dopt_core::PmSequence;

fn pair(entry: &CatalogEntry) -> (PmSequence, PmSequence) {
    let (x, y) = entry.blocks().unwrap().unwrap();
    (
        PmSequence::from_set(entry.v, &x).unwrap(),
        PmSequence::from_set(entry.v, &y).unwrap(),
    )
}

fn first(v: usize) -> &'static CatalogEntry {
    catalog_lookup(v)
        .into_iter()
        .find(|e| e.has_data())
        .unwrap()
}

#[test]
fn v93_divisor_sums() {
    for entry in catalog_lookup(93).into_iter().filter(|e| e.has_data()) {
        let (a, b) = pair(entry);
        let reports = divisor_sums_all(&a, &b).unwrap();
        let by_d: Vec<_> = reports
            .iter()
            .map(|(d, r)| (*d, r.sum_squares, r.cross))
            .collect();
        assert_eq!(by_d, vec![(3, 246, 62), (31, 190, 90)]);
    }
}

#[test]
fn v93_row_sums_split_over_three_strides() {
    let (a, b) = pair(first(93));
    let p = strided_sums(&a, &b, 3).unwrap();
    assert_eq!(p.a_sums.iter().sum::<i64>(), 93 - 2 * 45);
    assert_eq!(p.b_sums.iter().sum::<i64>(), 93 - 2 * 37);
}

#[test]
fn v93_corollaries() {
    let (a, b) = pair(first(93));
    let vertical = corollary_check(&strided_sums(&a, &b, 3).unwrap(), Corollary::Vertical).unwrap();
    assert_eq!(vertical.equations, vec![(246, 246)]);
    let horizontal =
        corollary_check(&strided_sums(&a, &b, 31).unwrap(), Corollary::Horizontal).unwrap();
    assert_eq!(horizontal.equations, vec![(190, 190)]);
    assert!(corollary_check(&strided_sums(&a, &b, 31).unwrap(), Corollary::Vertical).is_err());
}

#[test]
fn sine_identity_on_every_composite_solution() {
    for entry in explicit_entries() {
        let (a, b) = pair(entry);
        for d in divisors(entry.v)
            .into_iter()
            .filter(|&d| d > 1 && d < entry.v)
        {
            let profile = strided_sums(&a, &b, d).unwrap();
            for r in 1..d {
                let s = sine_identity_check(&profile, r);
                assert!(
                    s.passed,
                    "v={} d={d} r={r}: {} vs {}",
                    entry.v, s.value, s.expected
                );
            }
        }
    }
    let (a, b) = pair(first(93));
    let s = sine_identity_check(&strided_sums(&a, &b, 3).unwrap(), 1);
    assert!((s.value - 46.5).abs() <= psd_tolerance(93));
}

#[test]
fn sine_identity_v5() {
    let a = PmSequence::from_set(5, &[0]).unwrap();
    let b = PmSequence::from_set(5, &[0]).unwrap();
    let s = sine_identity_check(&strided_sums(&a, &b, 5).unwrap(), 1);
    assert!((s.value - 2.5).abs() < 1e-9);
}

#[test]
fn v131_spectrum() {
    for entry in catalog_lookup(131).into_iter().filter(|e| e.has_data()) {
        let (a, b) = pair(entry);
        let (pa, pb) = (psd(&a), psd(&b));
        assert!((pa[0] + pb[0] - 522.0).abs() <= psd_tolerance(131));
        for k in 1..131 {
            assert!((pa[k] + pb[k] - 260.0).abs() <= psd_tolerance(131));
        }
        assert!((psd_at(&a, 1) - psd_at(&a, 53)).abs() <= psd_tolerance(131));
        assert!((psd_at(&b, 1) - psd_at(&b, 53)).abs() <= psd_tolerance(131));
    }
}

#[test]
fn v131_orbit_counts() {
    let sys = OrbitSystem::from_generators(131, &[53]).unwrap();
    assert_eq!(sys.len(), 27);
    assert_eq!(sys.with_negation().len(), 14);
}

/// The v=241 family: blocks built from the transcribed orbit labels match
/// the catalog and certify.
#[test]
fn v241_reconstruction() {
    let entry = first(241);
    assert_eq!(entry.j.as_deref(), Some(&[3, 4, 5, 6, 7, 10, 13, 38][..]));
    assert_eq!(entry.k.as_deref(), Some(&[3, 5, 7, 11, 19, 35, 38][..]));
    let sys = OrbitSystem::from_generators(241, &[24]).unwrap();
    assert_eq!(sys.subgroup().order(), 15);
    let x = sys.union_of(&[3, 4, 5, 6, 7, 10, 13, 38]);
    let y = sys.union_of(&[3, 5, 7, 11, 19, 35, 38]);
    assert_eq!((x.len(), y.len()), (120, 105));
    assert!(verify_sds(&x, &y, &entry.params().unwrap())
        .unwrap()
        .passed());
}

/// Matching fingerprints are equivalent to the SDS property for every
/// explicit orbit-structured entry.
#[test]
fn fingerprints_agree_on_explicit_entries() {
    for entry in explicit_entries() {
        let gens = entry.generators.clone().unwrap_or_default();
        let space = SearchSpace::new(entry.params().unwrap(), &gens).unwrap();
        let (x, y) = entry.blocks().unwrap().unwrap();
        assert_eq!(
            encode_fingerprint(&x, Side::A, &space),
            encode_fingerprint(&y, Side::B, &space),
            "{}",
            entry.source
        );
    }
}

#[test]
fn v93_solutions_from_labels() {
    for entry in catalog_lookup(93).into_iter().filter(|e| e.has_data()) {
        let (a, b) = pair(entry);
        assert!(verify_matrix_equation(&a, &b).unwrap());
        assert!(applicable_corollaries(&a, &b)
            .unwrap()
            .iter()
            .all(|r| r.passed()));
    }
}
