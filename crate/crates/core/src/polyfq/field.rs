use std::fmt;
use std::sync::Arc;

use crate::arith::{self, mul_mod};
use crate::error::{Error, Result};

use super::factor::is_irreducible;
use super::poly::FqPoly;

/// Largest non-prime field order we build tables for.
pub const MAX_COMPOSITE_ORDER: u64 = 1 << 20;

/// The finite field `F_q`.
///
/// Elements are `u64` values in `[0, q)`. For a prime `q` that is the residue
/// itself; for `q = p^e` it packs the coefficient vector `(c_0, …, c_{e-1})`
/// over `F_p` as `Σ c_i p^i`, relative to the smallest monic irreducible of
/// degree `e` (polynomials compared by their packed value). Elements of the
/// prime subfield are therefore `0..p` in both cases.
#[derive(Clone)]
pub struct Fq(Arc<Inner>);

struct Inner {
    q: u64,
    p: u64,
    e: u32,
    /// Ascending digits of the defining polynomial over `F_p`, monic, degree `e`.
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

impl Fq {
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = arith::is_prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if e == 1 {
            return Ok(Fq(Arc::new(Inner {
                q,
                p,
                e,
                modulus: Vec::new(),
                exp: Vec::new(),
                log: Vec::new(),
            })));
        }
        if q > MAX_COMPOSITE_ORDER {
            return Err(Error::Unsupported(format!(
                "field order {q} = {p}^{e} exceeds {MAX_COMPOSITE_ORDER} for non-prime fields"
            )));
        }
        let prime = Fq::new(p)?;
        let modulus = smallest_irreducible(&prime, e as usize)?;
        let mut inner = Inner {
            q,
            p,
            e,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        build_tables(&mut inner)?;
        Ok(Fq(Arc::new(inner)))
    }

    pub fn order(&self) -> u64 {
        self.0.q
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.0.e
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Ascending digits of the polynomial defining `F_q` over `F_p`; empty for
    /// prime fields.
    pub fn defining_polynomial(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn contains(&self, a: u64) -> bool {
        a < self.0.q
    }

    /// Embeds an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.0.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let inner = &*self.0;
        if inner.e == 1 {
            let s = a + b;
            if s >= inner.q {
                s - inner.q
            } else {
                s
            }
        } else if inner.p == 2 {
            a ^ b
        } else {
            digitwise(inner.p, a, b, |x, y, p| (x + y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        let inner = &*self.0;
        if inner.e == 1 {
            if a == 0 {
                0
            } else {
                inner.q - a
            }
        } else if inner.p == 2 {
            a
        } else {
            digitwise(inner.p, 0, a, |x, y, p| (x + p - y) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let inner = &*self.0;
        if inner.e == 1 {
            mul_mod(a, b, inner.q)
        } else if a == 0 || b == 0 {
            0
        } else {
            let l = inner.log[a as usize] as u64 + inner.log[b as usize] as u64;
            inner.exp[(l % (inner.q - 1)) as usize] as u64
        }
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        let inner = &*self.0;
        if inner.e == 1 {
            Some(arith::mod_pow(a, inner.q - 2, inner.q).expect("q >= 2"))
        } else {
            let l = inner.log[a as usize] as u64;
            Some(inner.exp[((inner.q - 1 - l) % (inner.q - 1)) as usize] as u64)
        }
    }

    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut result = 1;
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Coefficient vector of `a` over `F_p` (ascending, length `e`).
    pub fn digits(&self, mut a: u64) -> Vec<u64> {
        let p = self.0.p;
        (0..self.0.e)
            .map(|_| {
                let d = a % p;
                a /= p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> Result<u64> {
        let p = self.0.p;
        if digits.len() != self.0.e as usize || digits.iter().any(|&d| d >= p) {
            return Err(Error::HypothesesUnmet(format!(
                "{digits:?} is not an element of F_{}",
                self.0.q
            )));
        }
        Ok(digits.iter().rev().fold(0, |acc, &d| acc * p + d))
    }
}

fn digitwise(p: u64, mut a: u64, mut b: u64, op: impl Fn(u64, u64, u64) -> u64) -> u64 {
    let mut out = 0;
    let mut scale = 1;
    while a > 0 || b > 0 {
        out += op(a % p, b % p, p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn smallest_irreducible(prime: &Fq, degree: usize) -> Result<Vec<u64>> {
    let p = prime.order();
    let count = p.pow(degree as u32);
    for low in 0..count {
        let mut coeffs = prime.digits_base(low, degree);
        coeffs.push(1);
        let f = FqPoly::new(prime.clone(), coeffs.clone())?;
        if is_irreducible(&f)? {
            return Ok(coeffs);
        }
    }
    Err(Error::Internal(format!(
        "no irreducible polynomial of degree {degree} over F_{p}"
    )))
}

impl Fq {
    fn digits_base(&self, mut v: u64, len: usize) -> Vec<u64> {
        let p = self.0.p;
        (0..len)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }
}

// Multiplication in F_p[z]/(modulus) on packed values, used only while
// building the log tables.
fn slow_mul(inner: &Inner, a: u64, b: u64) -> u64 {
    let (p, e) = (inner.p, inner.e as usize);
    let unpack = |mut v: u64| -> Vec<u64> {
        (0..e)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    };
    let (da, db) = (unpack(a), unpack(b));
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for top in (e..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in inner.modulus[..e].iter().enumerate() {
            let k = top - e + i;
            prod[k] = (prod[k] + (p - c) * m) % p;
        }
    }
    prod[..e].iter().rev().fold(0, |acc, &d| acc * p + d)
}

fn build_tables(inner: &mut Inner) -> Result<()> {
    let q = inner.q;
    let order = q - 1;
    let primes: Vec<u64> = arith::factorize(order)?.primes().collect();
    let pow = |inner: &Inner, a: u64, mut e: u64| {
        let mut r = 1u64;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = slow_mul(inner, r, b);
            }
            b = slow_mul(inner, b, b);
            e >>= 1;
        }
        r
    };
    let generator = (2..q)
        .find(|&g| primes.iter().all(|&r| pow(inner, g, order / r) != 1))
        .ok_or_else(|| Error::Internal(format!("no generator of F_{q}^*")))?;
    let mut exp = vec![0u32; order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for (i, slot) in exp.iter_mut().enumerate() {
        *slot = x as u32;
        log[x as usize] = i as u32;
        x = slow_mul(inner, x, generator);
    }
    inner.exp = exp;
    inner.log = log;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_ops() {
        let f = Fq::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), Some(5));
        assert_eq!(f.inv(0), None);
        assert_eq!(f.from_int(-1), 6);
    }

    #[test]
    fn defining_polynomials() {
        // x^2 + x + 1, x^3 + x + 1, x^2 + 1, x^2 + 2
        assert_eq!(Fq::new(4).unwrap().defining_polynomial(), &[1, 1, 1]);
        assert_eq!(Fq::new(8).unwrap().defining_polynomial(), &[1, 1, 0, 1]);
        assert_eq!(Fq::new(9).unwrap().defining_polynomial(), &[1, 0, 1]);
        assert_eq!(Fq::new(25).unwrap().defining_polynomial(), &[2, 0, 1]);
    }

    #[test]
    fn composite_field_axioms() {
        for q in [4u64, 8, 9, 16, 25, 27] {
            let f = Fq::new(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "q={q} a={a}");
                }
                for b in 0..q {
                    assert_eq!(f.mul(a, b), slow_mul(&f.0, a, b), "q={q}");
                    let c = (a * 7 + b * 3) % q;
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c))
                    );
                }
            }
            // x^q = x
            assert!((0..q).all(|a| f.pow(a, q) == a));
        }
    }

    #[test]
    fn digit_round_trip() {
        let f = Fq::new(9).unwrap();
        for a in 0..9 {
            assert_eq!(f.from_digits(&f.digits(a)).unwrap(), a);
        }
        assert!(f.from_digits(&[3, 0]).is_err());
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(matches!(Fq::new(12), Err(Error::NotPrimePower(12))));
        assert!(matches!(Fq::new(1 << 40), Err(Error::Unsupported(_))));
    }
}
