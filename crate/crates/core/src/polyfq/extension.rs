use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::orders;
use crate::spectrum::check_inputs;

use super::factor::{ddf, edf, is_irreducible};
use super::field::Fq;
use super::poly::{self, FqPoly};

/// Element of an [`ExtensionField`]: a reduced residue polynomial over the
/// base field, ascending, no trailing zeros.
pub type ExtElem = Vec<u64>;

/// `F_{q^s} = F_q[y] / (modulus)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField {
    modulus: FqPoly,
}

impl ExtensionField {
    pub fn new(modulus: FqPoly) -> Result<Self> {
        if !modulus.is_monic() || !is_irreducible(&modulus)? {
            return Err(Error::HypothesesUnmet(format!(
                "{modulus} is not monic irreducible"
            )));
        }
        Ok(ExtensionField { modulus })
    }

    pub fn base(&self) -> &Fq {
        self.modulus.field()
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().expect("nonzero modulus")
    }

    pub fn modulus(&self) -> &FqPoly {
        &self.modulus
    }

    /// Number of elements, when it fits in 128 bits.
    pub fn order(&self) -> Option<u128> {
        (self.base().order() as u128).checked_pow(self.degree() as u32)
    }

    pub fn one(&self) -> ExtElem {
        poly::rem(self.base(), &[1], self.modulus.coeffs())
    }

    /// The class of `y`.
    pub fn generator(&self) -> ExtElem {
        poly::rem(self.base(), &[0, 1], self.modulus.coeffs())
    }

    pub fn embed(&self, c: u64) -> ExtElem {
        let mut v = vec![c];
        poly::trim(&mut v);
        v
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> ExtElem {
        poly::add(self.base(), a, b)
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> ExtElem {
        poly::sub(self.base(), a, b)
    }

    pub fn neg(&self, a: &[u64]) -> ExtElem {
        poly::sub(self.base(), &[], a)
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> ExtElem {
        poly::mulmod(self.base(), a, b, self.modulus.coeffs())
    }

    pub fn pow(&self, a: &[u64], e: u64) -> ExtElem {
        poly::powmod(self.base(), a, e, self.modulus.coeffs())
    }

    /// `Some(c)` when `a` lies in the base field.
    pub fn to_base(&self, a: &[u64]) -> Option<u64> {
        match a {
            [] => Some(0),
            [c] => Some(*c),
            _ => None,
        }
    }
}

/// A primitive `n`-th root of unity in the splitting field of `x^n - 1`.
#[derive(Clone, Debug)]
pub struct RootOfUnity {
    pub n: u64,
    pub field: ExtensionField,
    pub gamma: ExtElem,
}

fn has_exact_order(field: &ExtensionField, gamma: &[u64], n: u64, primes: &[u64]) -> bool {
    let one = field.one();
    field.pow(gamma, n) == one && primes.iter().all(|&p| field.pow(gamma, n / p) != one)
}

/// Builds `F_{q^s}`, `s = ord_n q`, as the quotient by an irreducible factor of
/// `x^n - 1` whose roots have order exactly `n`, and returns the class of `y`.
///
/// The degree-`s` part of `x^n - 1` is first stripped of every factor shared
/// with `x^(n/p) - 1`; the canonically smallest remaining factor is used, so
/// the result does not depend on `seed`.
pub fn find_root_of_unity(n: u64, q: u64, seed: u64) -> Result<RootOfUnity> {
    check_inputs(n, q)?;
    let field = Fq::new(q)?;
    let s = orders::ord_mod(n, q)? as usize;
    let primes: Vec<u64> = factorize(n)?.primes().collect();
    let len = usize::try_from(n).map_err(|_| Error::RangeExceeded("n too large".into()))?;
    let xn = FqPoly::x_pow_minus_one(field.clone(), len);
    let mut part = ddf(&xn)?
        .into_iter()
        .find(|(d, _)| *d == s)
        .map(|(_, p)| p)
        .ok_or_else(|| Error::Internal(format!("x^{n} - 1 has no factor of degree {s}")))?;
    for &p in &primes {
        let lower = FqPoly::x_pow_minus_one(field.clone(), len / p as usize);
        let shared = poly::poly_gcd(&part, &lower)?;
        if !shared.is_one() {
            part = poly::poly_div_exact(&part, &shared)?;
        }
    }
    for candidate in edf(&part, s, seed)? {
        let ext = ExtensionField::new(candidate)?;
        let gamma = ext.generator();
        if has_exact_order(&ext, &gamma, n, &primes) {
            return Ok(RootOfUnity {
                n,
                field: ext,
                gamma,
            });
        }
    }
    Err(Error::Internal(format!(
        "no degree-{s} factor of x^{n} - 1 has a root of order {n}"
    )))
}
