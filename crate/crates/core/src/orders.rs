//! Multiplicative orders of `q` modulo prime powers and composites, the
//! lifting-the-exponent valuation, and the homogeneous order condition.
//!
//! `q^R - 1` is never materialized. Whenever a valuation or gcd against it is
//! needed we either use the per-prime `beta` values (exact under the
//! homogeneous order condition) or reduce `q^R` modulo `n` first.

use serde::{Deserialize, Serialize};

use crate::arith::{self, factorize, gcd, is_prime, mod_pow, Factorization};
use crate::error::{Error, Result};

/// Order/valuation data of `q` at one prime `p` of `n`.
///
/// For `p = 2` and `q ≡ 3 (mod 4)` the profile stores `rho = 2` and
/// `beta = ν_2(q^2 - 1)`, which is what the order formula for powers of two
/// consumes in that branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeProfile {
    pub p: u64,
    pub alpha: u32,
    pub rho: u64,
    /// `ν_p(q^rho - 1)`. Saturates at the largest `j` with `p^j < 2^64`,
    /// which is already larger than any exponent of `p` in a 63-bit `n`.
    pub beta: u32,
}

impl PrimeProfile {
    pub fn new(p: u64, alpha: u32, q: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::HypothesesUnmet(format!("{p} is not prime")));
        }
        if q % p == 0 {
            return Err(Error::OrderUndefined { p, q });
        }
        let (rho, beta) = if p == 2 && q % 4 == 3 {
            // ν_2(q^2 - 1) = ν_2(q - 1) + ν_2(q + 1) = 1 + ν_2(q + 1)
            (2, 1 + (q + 1).trailing_zeros())
        } else {
            let rho = ord_mod_prime(p, q)?;
            (rho, valuation_of_power_minus_one(p, q, rho))
        };
        Ok(PrimeProfile {
            p,
            alpha,
            rho,
            beta,
        })
    }

    fn is_two_three_mod_four(&self, q: u64) -> bool {
        self.p == 2 && q % 4 == 3
    }

    /// Order of `q` modulo `p^theta`.
    fn order_at(&self, theta: u32, q: u64) -> Result<u64> {
        let (p, rho, beta) = (self.p, self.rho, self.beta);
        if theta == 0 {
            return Ok(1);
        }
        if self.is_two_three_mod_four(q) {
            return Ok(match theta {
                1 => 1,
                t if t <= beta => 2,
                t => arith::checked_pow(2, t - beta + 1)?,
            });
        }
        if theta <= beta {
            Ok(rho)
        } else {
            rho.checked_mul(arith::checked_pow(p, theta - beta)?)
                .ok_or_else(|| Error::RangeExceeded("order overflows 64 bits".into()))
        }
    }
}

/// Order of `q` modulo the prime `p` (`q` not divisible by `p`).
fn ord_mod_prime(p: u64, q: u64) -> Result<u64> {
    if p == 2 {
        return Ok(1);
    }
    let mut e = p - 1;
    for r in factorize(p - 1)?.primes() {
        while e % r == 0 && mod_pow(q, e / r, p)? == 1 {
            e /= r;
        }
    }
    Ok(e)
}

// ν_p(q^rho - 1) by successive tests modulo p^j, given q^rho ≡ 1 (mod p).
fn valuation_of_power_minus_one(p: u64, q: u64, rho: u64) -> u32 {
    if rho == 1 {
        return arith::nu(p, q - 1).expect("q >= 2");
    }
    let mut j = 1u32;
    let mut pj = p;
    while let Some(next) = pj.checked_mul(p) {
        if arith::mod_pow(q, rho, next).expect("nonzero modulus") != 1 {
            return j;
        }
        j += 1;
        pj = next;
    }
    j
}

fn nu_u128(p: u128, mut m: u128) -> u32 {
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    e
}

/// `ν_p(a^n - b^n)` from the lifting-the-exponent identities, without
/// evaluating the power difference.
pub fn lte_valuation(p: u64, a: i64, b: i64, n: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::LteHypotheses(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::Zero);
    }
    let pi = p as i128;
    let (a, b) = (a as i128, b as i128);
    if a % pi == 0 || b % pi == 0 {
        return Err(Error::LteHypotheses(format!("{p} divides ab")));
    }
    if a == b || (a - b) % pi != 0 {
        return Err(Error::LteHypotheses(format!(
            "{p} does not divide a - b, or a = b"
        )));
    }
    let diff = (a - b).unsigned_abs();
    if p != 2 {
        return Ok(nu_u128(p as u128, diff) + arith::nu(p, n)?);
    }
    if n % 2 == 1 {
        Ok(nu_u128(2, diff))
    } else {
        // a^2 - b^2 = (a - b)(a + b); the sum is even and nonzero unless a = -b
        let sum = (a + b).unsigned_abs();
        if sum == 0 {
            return Err(Error::LteHypotheses("a^n - b^n = 0".into()));
        }
        Ok(nu_u128(2, diff) + nu_u128(2, sum) + n.trailing_zeros() - 1)
    }
}

/// Multiplicative order of `q` modulo `p^theta`.
pub fn ord_prime_power(p: u64, theta: u32, q: u64) -> Result<u64> {
    if q % p == 0 {
        return Err(Error::OrderUndefined { p, q });
    }
    if theta == 0 {
        return Ok(1);
    }
    PrimeProfile::new(p, theta, q)?.order_at(theta, q)
}

/// Multiplicative order of `q` modulo `m`, assembled as the lcm of the
/// prime-power orders.
pub fn ord_mod(m: u64, q: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Zero);
    }
    if gcd(m, q) != 1 {
        return Err(Error::NotCoprime { n: m, q });
    }
    ord_mod_factored(&factorize(m)?, q)
}

pub(crate) fn ord_mod_factored(m: &Factorization, q: u64) -> Result<u64> {
    m.factors().iter().try_fold(1u64, |acc, &(p, e)| {
        arith::lcm(acc, ord_prime_power(p, e, q)?)
    })
}

/// Per-prime order table: `orders[i][theta]` is the order of `q` modulo
/// `p_i^theta` for `theta` in `0..=alpha_i`.
pub(crate) fn prime_power_order_table(profiles: &[PrimeProfile], q: u64) -> Result<Vec<Vec<u64>>> {
    profiles
        .iter()
        .map(|pr| (0..=pr.alpha).map(|t| pr.order_at(t, q)).collect())
        .collect()
}

pub(crate) fn check_field_order(q: u64) -> Result<(u64, u32)> {
    arith::is_prime_power(q).ok_or(Error::NotPrimePower(q))
}

/// One [`PrimeProfile`] per prime factor of `n`.
pub fn profile(n: u64, q: u64) -> Result<Vec<PrimeProfile>> {
    check_field_order(q)?;
    if gcd(n, q) != 1 {
        return Err(Error::NotCoprime { n, q });
    }
    factorize(n)?
        .factors()
        .iter()
        .map(|&(p, alpha)| PrimeProfile::new(p, alpha, q))
        .collect()
}

/// Outcome of testing the homogeneous order condition on `(n, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HocStatus {
    pub n: u64,
    pub q: u64,
    pub holds: bool,
    /// Common value of every pairwise `gcd(rho_i, rho_j)`.
    pub rho: Option<u64>,
    /// `lcm` of all `rho_i`.
    pub rho_lcm: Option<u64>,
    pub profiles: Vec<PrimeProfile>,
    pub violations: Vec<String>,
}

/// Tests the homogeneous order condition.
///
/// A single-prime `n` satisfies it with `rho = rho_lcm = rho_1` as long as
/// `gcd(rho_1, n) = 1`; the pairwise requirement is vacuous there.
pub fn hoc_status(n: u64, q: u64) -> Result<HocStatus> {
    if n < 2 {
        return Err(Error::HypothesesUnmet(
            "homogeneous order condition needs n >= 2".into(),
        ));
    }
    let profiles = profile(n, q)?;
    let mut violations = Vec::new();
    for pr in &profiles {
        if gcd(pr.rho, n) != 1 {
            violations.push(format!("gcd(ρ={}, n={}) ≠ 1 (p={})", pr.rho, n, pr.p));
        }
    }
    let rho = if profiles.len() == 1 {
        Some(profiles[0].rho)
    } else {
        let mut common: Option<u64> = None;
        let mut uniform = true;
        for (i, a) in profiles.iter().enumerate() {
            for b in &profiles[i + 1..] {
                let g = gcd(a.rho, b.rho);
                match common {
                    None => common = Some(g),
                    Some(c) if c != g => {
                        uniform = false;
                        violations.push(format!(
                            "gcd(ρ_{}={}, ρ_{}={}) = {} differs from {}",
                            a.p, a.rho, b.p, b.rho, g, c
                        ));
                    }
                    _ => {}
                }
            }
        }
        common.filter(|_| uniform)
    };
    let holds = violations.is_empty();
    let (rho, rho_lcm) = if holds {
        let rho = rho.expect("pairwise gcd exists when the condition holds");
        let lcm = profiles
            .iter()
            .try_fold(1u64, |acc, pr| arith::lcm(acc, pr.rho))?;
        // lcm = ∏ rho_i / rho^(l-1) when the quotients rho_i/rho are pairwise coprime
        let product: u128 = profiles.iter().map(|pr| pr.rho as u128).product();
        let divisor = (rho as u128).pow(profiles.len() as u32 - 1);
        if product % divisor != 0 || product / divisor != lcm as u128 {
            return Err(Error::Internal(format!(
                "lcm identity failed for n={n}, q={q}"
            )));
        }
        (Some(rho), Some(lcm))
    } else {
        (None, None)
    };
    Ok(HocStatus {
        n,
        q,
        holds,
        rho,
        rho_lcm,
        profiles,
        violations,
    })
}

impl HocStatus {
    fn require_holds(&self) -> Result<(u64, u64)> {
        match (self.holds, self.rho, self.rho_lcm) {
            (true, Some(rho), Some(r)) => Ok((rho, r)),
            _ => Err(Error::HypothesesUnmet(format!(
                "homogeneous order condition fails for n={}, q={}",
                self.n, self.q
            ))),
        }
    }

    /// `gcd(d, q^R - 1)` for a divisor `d` of `n`, as `∏ p_i^min(ν_{p_i}(d), beta_i)`.
    pub fn gcd_with_qr_minus_one(&self, d: u64) -> Result<u64> {
        self.require_holds()?;
        if d == 0 || self.n % d != 0 {
            return Err(Error::NotDivisor { d, n: self.n });
        }
        let mut g = 1u64;
        for pr in &self.profiles {
            let v = arith::nu(pr.p, d)?;
            g *= pr.p.pow(v.min(pr.beta));
        }
        Ok(g)
    }

    /// `gcd(m, q^R - 1)` computed by reducing `q^R` modulo `m`.
    pub fn gcd_with_qr_minus_one_direct(&self, m: u64) -> Result<u64> {
        let (_, r) = self.require_holds()?;
        if m == 0 {
            return Err(Error::Zero);
        }
        let qr = mod_pow(self.q, r, m)?;
        Ok(gcd(m, (qr + m - 1) % m))
    }
}

/// Order of `q` modulo a divisor `d >= 2` of `n` via the closed form valid
/// under the homogeneous order condition.
pub fn hoc_order(d: u64, status: &HocStatus) -> Result<u64> {
    let (rho, _) = status.require_holds()?;
    if d < 2 || status.n % d != 0 {
        return Err(Error::NotDivisor { d, n: status.n });
    }
    let g = status.gcd_with_qr_minus_one(d)?;
    let mut order = rho as u128 * (d / g) as u128;
    for pr in &status.profiles {
        if d % pr.p == 0 {
            order *= (pr.rho / rho) as u128;
        }
    }
    u64::try_from(order).map_err(|_| Error::RangeExceeded("order overflows 64 bits".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lte_examples() {
        assert_eq!(lte_valuation(3, 4, 1, 3).unwrap(), 2);
        assert_eq!(lte_valuation(2, 3, 1, 5).unwrap(), 1);
        assert_eq!(lte_valuation(2, 3, 1, 4).unwrap(), 4);
        assert!(matches!(lte_valuation(3, 3, 1, 2), Err(Error::LteHypotheses(_))));
        assert!(matches!(lte_valuation(3, 5, 1, 2), Err(Error::LteHypotheses(_))));
        assert!(matches!(lte_valuation(3, 4, 4, 2), Err(Error::LteHypotheses(_))));
    }

    #[test]
    fn prime_power_orders() {
        assert_eq!(ord_prime_power(3, 2, 2).unwrap(), 6);
        assert_eq!(ord_prime_power(2, 3, 3).unwrap(), 2);
        assert_eq!(ord_prime_power(7, 0, 2).unwrap(), 1);
        assert_eq!(ord_prime_power(2, 1, 3).unwrap(), 1);
        assert_eq!(ord_prime_power(2, 5, 3).unwrap(), 8);
        assert_eq!(ord_prime_power(3, 2, 9), Err(Error::OrderUndefined { p: 3, q: 9 }));
    }

    #[test]
    fn composite_orders() {
        assert_eq!(ord_mod(15, 2).unwrap(), 4);
        assert_eq!(ord_mod(45, 2).unwrap(), 12);
        assert_eq!(ord_mod(1, 7).unwrap(), 1);
        assert_eq!(ord_mod(6, 2), Err(Error::NotCoprime { n: 6, q: 2 }));
    }

    #[test]
    fn profiles() {
        let p = profile(45, 2).unwrap();
        assert_eq!(
            p,
            vec![
                PrimeProfile { p: 3, alpha: 2, rho: 2, beta: 1 },
                PrimeProfile { p: 5, alpha: 1, rho: 4, beta: 1 },
            ]
        );
        assert_eq!(profile(8, 3).unwrap(), vec![PrimeProfile { p: 2, alpha: 3, rho: 2, beta: 3 }]);
        assert_eq!(profile(7, 2).unwrap(), vec![PrimeProfile { p: 7, alpha: 1, rho: 3, beta: 1 }]);
        assert_eq!(profile(7, 6), Err(Error::NotPrimePower(6)));
    }

    #[test]
    fn beta_for_large_q() {
        // q = 1 + 3^39 need not be a prime power; build the profile directly
        let q = 1 + 3u64.pow(39);
        let pr = PrimeProfile::new(3, 1, q).unwrap();
        assert_eq!(pr.rho, 1);
        assert_eq!(pr.beta, 39);
    }

    #[test]
    fn hoc_examples() {
        let s = hoc_status(45, 2).unwrap();
        assert!(s.holds);
        assert_eq!((s.rho, s.rho_lcm), (Some(2), Some(4)));
        let s = hoc_status(15, 2).unwrap();
        assert_eq!((s.holds, s.rho, s.rho_lcm), (true, Some(2), Some(4)));
        let s = hoc_status(21, 2).unwrap();
        assert!(!s.holds);
        assert_eq!(s.violations, vec!["gcd(ρ=3, n=21) ≠ 1 (p=7)".to_string()]);
        let s = hoc_status(9, 2).unwrap();
        assert_eq!((s.holds, s.rho, s.rho_lcm), (true, Some(2), Some(2)));
        assert!(hoc_status(1, 2).is_err());
    }

    #[test]
    fn unequal_pairwise_gcds_fail() {
        // q=2: rho = 2, 4, 12 for p = 3, 5, 13; gcd(4, 12) = 4 breaks uniformity
        let s = hoc_status(3 * 5 * 13, 2).unwrap();
        assert!(!s.holds);
        assert!(s.violations.iter().any(|v| v.contains("differs")));
    }

    #[test]
    fn hoc_order_examples() {
        let s = hoc_status(45, 2).unwrap();
        assert_eq!(hoc_order(9, &s).unwrap(), 6);
        assert_eq!(hoc_order(45, &s).unwrap(), 12);
        assert_eq!(hoc_order(5, &s).unwrap(), 4);
        assert!(matches!(hoc_order(1, &s), Err(Error::NotDivisor { .. })));
        assert!(matches!(hoc_order(7, &s), Err(Error::NotDivisor { .. })));
        let bad = hoc_status(21, 2).unwrap();
        assert!(matches!(hoc_order(3, &bad), Err(Error::HypothesesUnmet(_))));
    }

    #[test]
    fn qr_gcd_routes_agree() {
        let s = hoc_status(225, 2).unwrap();
        for d in factorize(225).unwrap().divisors() {
            assert_eq!(
                s.gcd_with_qr_minus_one(d).unwrap(),
                s.gcd_with_qr_minus_one_direct(d).unwrap()
            );
        }
    }
}
