use ccc_core::arith::{factorize, gcd};
use ccc_core::orders::{hoc_order, hoc_status, lte_valuation, ord_mod, ord_prime_power};

const Q_LIST: [u64; 9] = [2, 3, 4, 5, 7, 8, 9, 11, 13];

fn naive_order(m: u64, q: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let mut x = q % m;
    let mut k = 1;
    while x != 1 {
        x = x * (q % m) % m;
        k += 1;
    }
    k
}

#[test]
fn order_matches_naive_search() {
    for &q in &Q_LIST {
        for m in 1..3000u64 {
            if gcd(m, q) == 1 {
                assert_eq!(ord_mod(m, q).unwrap(), naive_order(m, q), "m = {m}, q = {q}");
            }
        }
    }
}

#[test]
fn prime_power_orders_match_naive_search() {
    for &q in &Q_LIST {
        for p in [2u64, 3, 5, 7, 11, 13, 17, 31] {
            if q % p == 0 {
                continue;
            }
            let mut pe = 1u64;
            for theta in 1..=6u32 {
                pe *= p;
                if pe > 2_000_000 {
                    break;
                }
                assert_eq!(ord_prime_power(p, theta, q).unwrap(), naive_order(pe, q), "{p}^{theta}, q = {q}");
            }
        }
    }
}

#[test]
fn lte_valuations_match_direct_computation() {
    // ν_p(a^n - b^n) with small values computed exactly.
    let mut checked = 0;
    for (p, a, b) in [(3u64, 7i64, 4i64), (5, 11, 1), (2, 7, 3), (2, 5, 1), (7, 15, 1)] {
        for n in 1..12u64 {
            let diff = (a as i128).pow(n as u32) - (b as i128).pow(n as u32);
            let mut v = 0;
            let mut d = diff.abs();
            while d % p as i128 == 0 {
                d /= p as i128;
                v += 1;
            }
            if let Ok(got) = lte_valuation(p, a, b, n) {
                assert_eq!(got, v, "p = {p}, a = {a}, b = {b}, n = {n}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 40);
}

#[test]
fn hoc_order_identity_holds_up_to_5000() {
    let mut pairs = 0;
    for &q in &Q_LIST {
        for n in 2..=5000u64 {
            if gcd(n, q) != 1 {
                continue;
            }
            let status = hoc_status(n, q).unwrap();
            if !status.holds {
                continue;
            }
            pairs += 1;
            for d in factorize(n).unwrap().divisors().into_iter().skip(1) {
                assert_eq!(hoc_order(d, &status).unwrap(), ord_mod(d, q).unwrap(), "d = {d}, n = {n}, q = {q}");
            }
        }
    }
    assert!(pairs > 10_000);
}

#[test]
fn both_gcd_routes_agree() {
    for &q in &Q_LIST {
        for n in 2..=2000u64 {
            if gcd(n, q) != 1 {
                continue;
            }
            let status = hoc_status(n, q).unwrap();
            if !status.holds {
                continue;
            }
            for d in factorize(n).unwrap().divisors() {
                assert_eq!(
                    status.gcd_with_qr_minus_one(d).unwrap(),
                    status.gcd_with_qr_minus_one_direct(d).unwrap(),
                    "d = {d}, n = {n}, q = {q}"
                );
            }
        }
    }
}
