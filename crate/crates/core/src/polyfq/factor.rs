//! Distinct-degree and equal-degree factorization of squarefree polynomials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::field::Fq;
use super::poly::{self, FqPoly};

const MAX_SPLIT_ATTEMPTS: usize = 256;

fn ensure_squarefree(f: &FqPoly) -> Result<()> {
    let d = f.derivative();
    if d.is_zero() {
        return Err(Error::NotSquarefree);
    }
    if !poly::poly_gcd(f, &d)?.is_one() {
        return Err(Error::NotSquarefree);
    }
    Ok(())
}

/// Splits a squarefree monic `f` into `(d, product of all its irreducible
/// factors of degree d)` pairs, ascending in `d`.
pub fn ddf(f: &FqPoly) -> Result<Vec<(usize, FqPoly)>> {
    let field = f.field().clone();
    let Some(deg) = f.degree() else {
        return Err(Error::HypothesesUnmet("ddf of the zero polynomial".into()));
    };
    if !f.is_monic() {
        return Err(Error::HypothesesUnmet("ddf input must be monic".into()));
    }
    if deg == 0 {
        return Ok(Vec::new());
    }
    ensure_squarefree(f)?;
    let q = field.order();
    let mut rest = f.coeffs().to_vec();
    let x = vec![0u64, 1];
    let mut h = poly::rem(&field, &x, &rest);
    let mut out = Vec::new();
    let mut d = 0usize;
    while rest.len() > 2 * (d + 1) {
        d += 1;
        h = poly::powmod(&field, &h, q, &rest);
        let g = poly::gcd(&field, &poly::sub(&field, &h, &x), &rest);
        if g.len() > 1 {
            rest = poly::divrem(&field, &rest, &g).0;
            h = poly::rem(&field, &h, &rest);
            out.push((d, FqPoly::from_raw(field.clone(), g)));
        }
    }
    if rest.len() > 1 {
        out.push((rest.len() - 1, FqPoly::from_raw(field, rest)));
    }
    Ok(out)
}

/// Complete list of the monic irreducible factors of `f`, which must be a
/// product of distinct irreducibles of degree `d`. The result is sorted in
/// canonical order, so it does not depend on `seed`.
pub fn edf(f: &FqPoly, d: usize, seed: u64) -> Result<Vec<FqPoly>> {
    let deg = f
        .degree()
        .ok_or_else(|| Error::HypothesesUnmet("edf of the zero polynomial".into()))?;
    if d == 0 || deg % d != 0 {
        return Err(Error::HypothesesUnmet(format!(
            "degree {deg} is not a multiple of {d}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(deg / d);
    let mut pending = vec![f.monic().into_coeffs()];
    let field = f.field().clone();
    while let Some(g) = pending.pop() {
        if g.len() - 1 == d {
            out.push(FqPoly::from_raw(field.clone(), g));
            continue;
        }
        let h = split(&field, &g, d, &mut rng)?;
        let other = poly::divrem(&field, &g, &h).0;
        pending.push(h);
        pending.push(other);
    }
    out.sort();
    Ok(out)
}

// Returns a proper monic divisor of g.
fn split(field: &Fq, g: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    let q = field.order();
    let deg = g.len() - 1;
    for _ in 0..MAX_SPLIT_ATTEMPTS {
        let mut a: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..q)).collect();
        poly::trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let common = poly::gcd(field, &a, g);
        if common.len() > 1 && common.len() < g.len() {
            return Ok(common);
        }
        let b = if q % 2 == 0 {
            trace(field, &a, d, g)
        } else {
            let norm = frobenius_norm(field, &a, d, g);
            let half = poly::powmod(field, &norm, (q - 1) / 2, g);
            poly::sub(field, &half, &[1])
        };
        let h = poly::gcd(field, &b, g);
        if h.len() > 1 && h.len() < g.len() {
            return Ok(h);
        }
    }
    Err(Error::Internal(format!(
        "equal-degree splitting made no progress on a degree-{deg} input"
    )))
}

// a · a^q · a^(q^2) ⋯ a^(q^(d-1)) mod g, so that raising it to (q-1)/2 gives
// a^((q^d - 1)/2).
fn frobenius_norm(field: &Fq, a: &[u64], d: usize, g: &[u64]) -> Vec<u64> {
    let q = field.order();
    let mut t = poly::rem(field, a, g);
    let mut acc = t.clone();
    for _ in 1..d {
        t = poly::powmod(field, &t, q, g);
        acc = poly::mulmod(field, &acc, &t, g);
    }
    acc
}

// Absolute trace to F_2: Σ_{i < e·d} a^(2^i) mod g, for q = 2^e.
fn trace(field: &Fq, a: &[u64], d: usize, g: &[u64]) -> Vec<u64> {
    let steps = field.degree() as usize * d;
    let mut t = poly::rem(field, a, g);
    let mut acc = t.clone();
    for _ in 1..steps {
        t = poly::mulmod(field, &t, &t, g);
        acc = poly::add(field, &acc, &t);
    }
    acc
}

/// Irreducibility over `F_q` via distinct-degree factorization.
pub fn is_irreducible(f: &FqPoly) -> Result<bool> {
    let Some(deg) = f.degree() else {
        return Ok(false);
    };
    match deg {
        0 => Ok(false),
        1 => Ok(true),
        _ => {
            let m = f.monic();
            if ensure_squarefree(&m).is_err() {
                return Ok(false);
            }
            let parts = ddf(&m)?;
            Ok(parts.len() == 1 && parts[0].0 == deg)
        }
    }
}

/// Full factorization of a squarefree monic polynomial into monic
/// irreducibles, sorted canonically.
pub fn factor_squarefree(f: &FqPoly, seed: u64) -> Result<Vec<FqPoly>> {
    let mut out = Vec::new();
    for (d, part) in ddf(f)? {
        out.extend(edf(&part, d, seed)?);
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfq::poly::poly_mul;

    fn poly(q: u64, c: &[u64]) -> FqPoly {
        FqPoly::new(Fq::new(q).unwrap(), c.to_vec()).unwrap()
    }

    fn product(fs: &[FqPoly]) -> FqPoly {
        fs.iter()
            .fold(FqPoly::one(fs[0].field().clone()), |acc, f| poly_mul(&acc, f).unwrap())
    }

    #[test]
    fn ddf_of_x15_minus_1_over_f2() {
        let f = FqPoly::x_pow_minus_one(Fq::new(2).unwrap(), 15);
        let parts = ddf(&f).unwrap();
        let degs: Vec<(usize, usize)> = parts.iter().map(|(d, p)| (*d, p.degree().unwrap())).collect();
        assert_eq!(degs, vec![(1, 1), (2, 2), (4, 12)]);
        let quartics = edf(&parts[2].1, 4, 0).unwrap();
        assert_eq!(
            quartics,
            vec![poly(2, &[1, 1, 0, 0, 1]), poly(2, &[1, 0, 0, 1, 1]), poly(2, &[1, 1, 1, 1, 1])]
        );
        assert_eq!(product(&quartics), parts[2].1);
    }

    #[test]
    fn ddf_of_x8_minus_1_over_f3() {
        let f = FqPoly::x_pow_minus_one(Fq::new(3).unwrap(), 8);
        let parts = ddf(&f).unwrap();
        let degs: Vec<(usize, usize)> = parts.iter().map(|(d, p)| (*d, p.degree().unwrap())).collect();
        assert_eq!(degs, vec![(1, 2), (2, 6)]);
        let quads = edf(&parts[1].1, 2, 7).unwrap();
        assert_eq!(quads.len(), 3);
        assert_eq!(product(&quads), parts[1].1);
    }

    #[test]
    fn trivial_inputs() {
        let f = FqPoly::x_pow_minus_one(Fq::new(5).unwrap(), 1);
        assert_eq!(ddf(&f).unwrap(), vec![(1, f.clone())]);
        let irr = poly(2, &[1, 1, 0, 1]);
        assert_eq!(edf(&irr, 3, 0).unwrap(), vec![irr]);
    }

    #[test]
    fn rejects_non_squarefree() {
        // (x + 1)^2 over F_3
        let f = poly(3, &[1, 2, 1]);
        assert_eq!(ddf(&f), Err(Error::NotSquarefree));
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&poly(3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(5, &[1, 0, 1])).unwrap());
        assert!(is_irreducible(&poly(7, &[4, 1])).unwrap());
        assert!(!is_irreducible(&poly(2, &[1, 0, 1])).unwrap());
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2
        assert!(!is_irreducible(&poly(2, &[1, 0, 1, 0, 1])).unwrap());
    }

    #[test]
    fn seed_independence_in_extension_fields() {
        for q in [4u64, 9] {
            let f = FqPoly::x_pow_minus_one(Fq::new(q).unwrap(), 35);
            let base = factor_squarefree(&f, 0).unwrap();
            for seed in 1..3 {
                assert_eq!(factor_squarefree(&f, seed).unwrap(), base);
            }
            assert_eq!(product(&base), f);
            assert!(base.iter().all(|g| is_irreducible(g).unwrap()));
        }
    }
}
