use std::collections::BTreeMap;

use ccc_core::arith::gcd;
use ccc_core::orders::hoc_status;
use ccc_core::spectrum::{
    auto_spectrum, coset_spectrum, divisor_spectrum, hoc_count_k, hoc_total, radical_formula, total_kuar,
    total_sase, Method, Spectrum,
};
use ccc_core::{arith::factorize, Rational};

const Q_LIST: [u64; 11] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25];

fn map(pairs: &[(u64, u64)]) -> BTreeMap<u64, u64> {
    pairs.iter().copied().collect()
}

// Frozen from an independent brute-force factorization of x^n - 1.
#[test]
fn brute_force_spectra() {
    let cases: [(u64, u64, &[(u64, u64)]); 6] = [
        (15, 2, &[(1, 1), (2, 1), (4, 3)]),
        (45, 2, &[(1, 1), (2, 1), (4, 3), (6, 1), (12, 2)]),
        (8, 3, &[(1, 2), (2, 3)]),
        (8, 5, &[(1, 4), (2, 2)]),
        (225, 2, &[(1, 1), (2, 1), (4, 3), (6, 1), (12, 2), (20, 3), (60, 2)]),
        (9, 2, &[(1, 1), (2, 1), (6, 1)]),
    ];
    for (n, q, expected) in cases {
        assert_eq!(divisor_spectrum(n, q).unwrap().entries, map(expected), "n = {n}, q = {q}");
        assert_eq!(coset_spectrum(n, q).unwrap().0.entries, map(expected), "n = {n}, q = {q}");
    }
}

#[test]
fn coset_walk_matches_divisor_count_up_to_3000() {
    for q in Q_LIST {
        for n in 1..=3000u64 {
            if gcd(n, q) != 1 {
                continue;
            }
            let reference = divisor_spectrum(n, q).unwrap();
            let (coset, cosets) = coset_spectrum(n, q).unwrap();
            assert!(coset.same_counts(&reference), "n = {n}, q = {q}");
            assert_eq!(reference.degree_sum(), n as u128);
            assert_eq!(reference.count(1), gcd(n, q - 1));
            assert_eq!(cosets.iter().map(|c| c.size() as u64).sum::<u64>(), n);
        }
    }
}

#[test]
fn auto_dispatch_examples() {
    let s = auto_spectrum(9, 2).unwrap();
    assert_eq!(s.method, Method::PrimePower);
    assert_eq!(s.entries, map(&[(1, 1), (2, 1), (6, 1)]));
    let s = auto_spectrum(8, 5).unwrap();
    assert_eq!(s.method, Method::Radical);
    assert_eq!(s.entries, map(&[(1, 4), (2, 2)]));
    assert_eq!(auto_spectrum(14, 3).unwrap().method, Method::Divisor);
    assert_eq!(auto_spectrum(45, 2).unwrap().method, Method::Divisor);
}

#[test]
fn auto_dispatch_always_equals_reference() {
    for q in [2u64, 3, 5, 7] {
        for n in 1..=400u64 {
            if gcd(n, q) != 1 {
                continue;
            }
            let a = auto_spectrum(n, q).unwrap();
            assert!(a.same_counts(&divisor_spectrum(n, q).unwrap()), "n = {n}, q = {q}");
        }
    }
}

#[test]
fn headline_totals() {
    assert_eq!(total_sase(3, 1, 5, 2).unwrap(), 5);
    assert_eq!(total_kuar(&factorize(45).unwrap(), 2).unwrap(), 8);
    assert_eq!(hoc_total(&hoc_status(45, 2).unwrap()).unwrap(), 8);
    assert_eq!(hoc_total(&hoc_status(225, 2).unwrap()).unwrap(), 13);
    let f = radical_formula(8, 3).unwrap();
    assert_eq!(f.r, Some(2));
    assert_eq!(f.total, Rational::from_integer(5));
}

#[test]
fn per_dimension_formula_is_flagged_not_rounded() {
    let status = hoc_status(45, 2).unwrap();
    let c = hoc_count_k(&status, 12).unwrap();
    assert_eq!(c.formula, Rational::new(5, 2));
    assert_eq!(c.oracle, 2);
    assert!(c.flagged);
    let c = hoc_count_k(&status, 1).unwrap();
    assert_eq!((c.formula, c.oracle, c.flagged), (Rational::from_integer(1), 1, false));
    // 7 passes all three feasibility conditions yet no factor has degree 7.
    let c = hoc_count_k(&status, 7).unwrap();
    assert!(c.feasibility.feasible);
    assert_eq!((c.formula, c.oracle, c.flagged), (Rational::new(15, 7), 0, true));
    let c = hoc_count_k(&status, 3).unwrap();
    assert_eq!(c.feasibility.failed_condition, Some(2));
    assert_eq!(c.formula, Rational::from_integer(0));
}

#[test]
fn dimension_one_formula_always_matches() {
    for q in Q_LIST {
        for n in 2..=1000u64 {
            if gcd(n, q) != 1 {
                continue;
            }
            let status = hoc_status(n, q).unwrap();
            if let Ok(c) = hoc_count_k(&status, 1) {
                assert!(!c.flagged, "n = {n}, q = {q}");
            }
        }
    }
}

#[test]
fn json_round_trip() {
    for (n, q) in [(45u64, 2u64), (1, 7), (225, 2), (8, 3)] {
        let s = auto_spectrum(n, q).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Spectrum>(&text).unwrap(), s);
    }
    assert!(serde_json::from_str::<Spectrum>(
        r#"{"n":3,"q":2,"method":"divisor","spectrum":[{"k":1,"count":1},{"k":2,"count":1}],"total":3}"#
    )
    .is_err());
}
