//! Exact 64-bit integer arithmetic: factorization, valuations, totients and
//! modular exponentiation.
//!
//! Inputs are capped at `2^63 - 1`; all intermediate products go through
//! `u128`, so nothing here ever wraps.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest accepted input.
pub const MAX_INPUT: u64 = (1 << 63) - 1;

const TRIAL_BOUND: u64 = 1_000_000;

/// Prime-power decomposition of a positive integer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs with strictly increasing primes.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Number of distinct prime factors.
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .iter()
            .find(|&&(r, _)| r == p)
            .map_or(0, |&(_, e)| e)
    }

    /// All positive divisors in ascending order.
    pub fn divisors(&self) -> Vec<u64> {
        let mut out = vec![1u64];
        for &(p, e) in &self.factors {
            let len = out.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    out.push(out[i] * pk);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e - 1) * (p - 1))
            .product()
    }

    /// Recomputes `∏ p^e`; used to check the invariant.
    pub fn reconstruct(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_BOUND as usize;
        let mut composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if !composite[i] {
                primes.push(i as u64);
                let mut j = i * i;
                while j <= limit {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        primes
    })
}

/// Factors `n` by trial division up to 10^6 followed by Pollard–Brent rho.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Zero);
    }
    if n > MAX_INPUT {
        return Err(Error::RangeExceeded(format!("{n} exceeds 2^63-1")));
    }
    let mut rest = n;
    let mut factors = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if rest > 1 {
        let mut large = Vec::new();
        split_large(rest, &mut large);
        large.sort_unstable();
        let mut i = 0;
        while i < large.len() {
            let p = large[i];
            let mut e = 0;
            while i < large.len() && large[i] == p {
                e += 1;
                i += 1;
            }
            factors.push((p, e));
        }
    }
    Ok(Factorization { value: n, factors })
}

fn split_large(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

// n is odd, composite and has no factor below the trial bound.
fn pollard_brent(n: u64) -> u64 {
    for c in 1u64.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        const BLOCK: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BLOCK.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BLOCK;
            }
            r *= 2;
        }
        if g == n {
            // backtrack one step at a time
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Deterministic Miller–Rabin, exact for every 64-bit integer.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod_unchecked(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_unchecked(base: u64, mut exp: u64, m: u64) -> u64 {
    let mut result = 1 % m;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul_mod(result, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    result
}

/// `base^exponent mod modulus`.
pub fn mod_pow(base: u64, exponent: u64, modulus: u64) -> Result<u64> {
    if modulus == 0 {
        return Err(Error::Zero);
    }
    Ok(pow_mod_unchecked(base, exponent, modulus))
}

/// p-adic valuation of `m`.
pub fn nu(p: u64, mut m: u64) -> Result<u32> {
    if m == 0 {
        return Err(Error::Zero);
    }
    if p < 2 {
        return Err(Error::HypothesesUnmet(format!("{p} is not prime")));
    }
    let mut e = 0;
    while m % p == 0 {
        m /= p;
        e += 1;
    }
    Ok(e)
}

pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n)?.euler_phi())
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple; overflow is reported, never wrapped.
pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b))
        .checked_mul(b)
        .ok_or_else(|| Error::RangeExceeded(format!("lcm({a}, {b}) overflows 64 bits")))
}

/// Returns `(p, e)` with `p^e = q`, or `None` when `q` is not a prime power.
pub fn is_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(q).ok()?;
    match f.factors() {
        [(p, e)] => Some((*p, *e)),
        _ => None,
    }
}

/// Checked `p^e`.
pub fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| Error::RangeExceeded(format!("{p}^{e} overflows 64 bits")))
}
