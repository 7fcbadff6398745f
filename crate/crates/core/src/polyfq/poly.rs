use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

use super::field::Fq;

/// Dense polynomial over `F_q`, ascending degree, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct FqPoly {
    field: Fq,
    coeffs: Vec<u64>,
}

impl FqPoly {
    pub fn new(field: Fq, mut coeffs: Vec<u64>) -> Result<Self> {
        if let Some(&c) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(Error::HypothesesUnmet(format!(
                "{c} is not an element of F_{}",
                field.order()
            )));
        }
        trim(&mut coeffs);
        Ok(FqPoly { field, coeffs })
    }

    pub(crate) fn from_raw(field: Fq, mut coeffs: Vec<u64>) -> Self {
        trim(&mut coeffs);
        FqPoly { field, coeffs }
    }

    pub fn zero(field: Fq) -> Self {
        FqPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: Fq) -> Self {
        FqPoly {
            field,
            coeffs: vec![1],
        }
    }

    pub fn x(field: Fq) -> Self {
        FqPoly {
            field,
            coeffs: vec![0, 1],
        }
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(field: Fq, n: usize) -> Self {
        let mut coeffs = vec![0; n + 1];
        coeffs[n] = 1;
        coeffs[0] = field.sub(coeffs[0], 1);
        FqPoly::from_raw(field, coeffs)
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<u64> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(1)
    }

    pub fn monic(&self) -> Self {
        FqPoly::from_raw(self.field.clone(), make_monic(&self.field, &self.coeffs))
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(f.from_int((i as u64 % f.characteristic()) as i64), c))
            .collect();
        FqPoly::from_raw(f.clone(), coeffs)
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.order(), other.field.order()));
        }
        Ok(())
    }

    /// Canonical order: by degree, then coefficients from the top down.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for FqPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FqPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .order()
            .cmp(&other.field.order())
            .then_with(|| self.canonical_cmp(other))
    }
}

impl fmt::Debug for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.field)
    }
}

/// `x^3 + 2x + 1` style; non-prime-field coefficients print as their packed
/// value in braces.
impl fmt::Display for FqPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let prime = self.field.is_prime_field();
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let coeff = if prime || c == 1 {
                c.to_string()
            } else {
                format!("{{{c}}}")
            };
            match (i, c) {
                (0, _) => f.write_str(&coeff)?,
                (_, 1) => {}
                _ => f.write_str(&coeff)?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

pub fn poly_add(a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    a.same_field(b)?;
    Ok(FqPoly::from_raw(a.field.clone(), add(&a.field, &a.coeffs, &b.coeffs)))
}

pub fn poly_sub(a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    a.same_field(b)?;
    Ok(FqPoly::from_raw(a.field.clone(), sub(&a.field, &a.coeffs, &b.coeffs)))
}

pub fn poly_mul(a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    a.same_field(b)?;
    Ok(FqPoly::from_raw(a.field.clone(), mul(&a.field, &a.coeffs, &b.coeffs)))
}

pub fn poly_divrem(a: &FqPoly, b: &FqPoly) -> Result<(FqPoly, FqPoly)> {
    a.same_field(b)?;
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let (q, r) = divrem(&a.field, &a.coeffs, &b.coeffs);
    Ok((
        FqPoly::from_raw(a.field.clone(), q),
        FqPoly::from_raw(a.field.clone(), r),
    ))
}

pub fn poly_rem(a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    Ok(poly_divrem(a, b)?.1)
}

/// Monic gcd; `gcd(0, 0)` is rejected as a division by zero.
pub fn poly_gcd(a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    a.same_field(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(FqPoly::from_raw(a.field.clone(), gcd(&a.field, &a.coeffs, &b.coeffs)))
}

/// Exact quotient `a / b`; a nonzero remainder is an error.
pub fn poly_div_exact(a: &FqPoly, b: &FqPoly) -> Result<FqPoly> {
    let (q, r) = poly_divrem(a, b)?;
    if !r.is_zero() {
        return Err(Error::Internal(format!("{b} does not divide {a}")));
    }
    Ok(q)
}

// Slice-level arithmetic shared by the polynomial and extension-field code.

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn add(f: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, &s) in out.iter_mut().zip(short) {
        *o = f.add(*o, s);
    }
    trim(&mut out);
    out
}

pub(crate) fn sub(f: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), 0);
    }
    for (o, &s) in out.iter_mut().zip(b) {
        *o = f.sub(*o, s);
    }
    trim(&mut out);
    out
}

pub(crate) fn scale(f: &Fq, a: &[u64], c: u64) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(f: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let len = a.len() + b.len() - 1;
    if f.is_prime_field() && f.order() < (1 << 31) {
        // products stay below 2^62; accumulate in u128 and reduce once
        let p = f.order() as u128;
        let mut acc = vec![0u128; len];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] += (x * y) as u128;
            }
        }
        let mut out: Vec<u64> = acc.into_iter().map(|v| (v % p) as u64).collect();
        trim(&mut out);
        return out;
    }
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Division with remainder; `b` must be nonzero.
pub(crate) fn divrem(f: &Fq, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    if a.len() < b.len() {
        return (Vec::new(), a.to_vec());
    }
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    let mut q = vec![0u64; a.len() - db];
    for top in (db..a.len()).rev() {
        let c = r[top];
        if c == 0 {
            continue;
        }
        let factor = f.mul(c, lead_inv);
        q[top - db] = factor;
        let shift = top - db;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(factor, bi));
        }
    }
    r.truncate(db);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(f: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.len() < b.len() {
        return a.to_vec();
    }
    divrem(f, a, b).1
}

pub(crate) fn make_monic(f: &Fq, a: &[u64]) -> Vec<u64> {
    match a.last() {
        None => Vec::new(),
        Some(&1) => a.to_vec(),
        Some(&lead) => scale(f, a, f.inv(lead).expect("nonzero")),
    }
}

pub(crate) fn gcd(f: &Fq, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &x)
}

pub(crate) fn mulmod(f: &Fq, a: &[u64], b: &[u64], m: &[u64]) -> Vec<u64> {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod(f: &Fq, base: &[u64], mut e: u64, m: &[u64]) -> Vec<u64> {
    let mut result = rem(f, &[1], m);
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(f, &result, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(f, &b, &b, m);
        }
    }
    result
}
