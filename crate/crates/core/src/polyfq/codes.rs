use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectrum::{coset_spectrum_with_budget, Coset};
use crate::Budget;

use super::extension::{find_root_of_unity, ExtElem, RootOfUnity};
use super::field::Fq;
use super::poly::{poly_div_exact, FqPoly};

/// A minimal cyclic code: one cyclotomic coset, its irreducible parity-check
/// polynomial `h` and the generator `g = (x^n - 1) / h`. The dimension is
/// `deg h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalCode {
    pub n: u64,
    pub q: u64,
    pub coset: Coset,
    pub parity_check: FqPoly,
    pub generator: FqPoly,
}

impl MinimalCode {
    pub fn dimension(&self) -> usize {
        self.coset.size()
    }

    pub fn to_record(&self) -> CodeRecord {
        CodeRecord {
            coset_rep: self.coset.representative,
            dimension: self.dimension(),
            generator: coefficients(&self.generator),
            parity_check: coefficients(&self.parity_check),
        }
    }
}

/// A coefficient as printed: an integer over a prime field, base-`p` digits
/// (lowest first, length `e`) over `F_{p^e}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Prime(u64),
    Digits(Vec<u64>),
}

impl std::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficient::Prime(c) => write!(f, "{c}"),
            Coefficient::Digits(d) => {
                let parts: Vec<String> = d.iter().map(u64::to_string).collect();
                write!(f, "({})", parts.join(" "))
            }
        }
    }
}

/// Serializable view of a [`MinimalCode`]; coefficients ascend in degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeRecord {
    pub coset_rep: u64,
    pub dimension: usize,
    pub generator: Vec<Coefficient>,
    pub parity_check: Vec<Coefficient>,
}

fn coefficients(f: &FqPoly) -> Vec<Coefficient> {
    let field = f.field();
    f.coeffs()
        .iter()
        .map(|&c| {
            if field.is_prime_field() {
                Coefficient::Prime(c)
            } else {
                Coefficient::Digits(field.digits(c))
            }
        })
        .collect()
}

/// All minimal cyclic codes of length `n` over `F_q`, sorted by coset
/// representative, under the `CCC_BUDGET` (or default) budget.
pub fn minimal_codes(n: u64, q: u64, seed: u64) -> Result<Vec<MinimalCode>> {
    minimal_codes_with_budget(n, q, seed, Budget::from_env())
}

pub fn minimal_codes_with_budget(n: u64, q: u64, seed: u64, budget: Budget) -> Result<Vec<MinimalCode>> {
    let (_, cosets) = coset_spectrum_with_budget(n, q, budget)?;
    let s = crate::orders::ord_mod(n, q)?;
    let cost = s.saturating_mul(n);
    if cost > budget.construction {
        return Err(Error::ConstructionBudget {
            cost,
            budget: budget.construction,
        });
    }
    let root = find_root_of_unity(n, q, seed)?;
    let powers = root_powers(&root);
    let base = root.field.base().clone();
    let xn = FqPoly::x_pow_minus_one(base.clone(), n as usize);
    cosets
        .into_par_iter()
        .map(|coset| {
            let h = coset_polynomial(&root, &powers, &base, &coset)?;
            let g = poly_div_exact(&xn, &h)?;
            Ok(MinimalCode {
                n,
                q,
                coset,
                parity_check: h,
                generator: g,
            })
        })
        .collect()
}

fn root_powers(root: &RootOfUnity) -> Vec<ExtElem> {
    let mut out = Vec::with_capacity(root.n as usize);
    let mut x = root.field.one();
    for _ in 0..root.n {
        out.push(x.clone());
        x = root.field.mul(&x, &root.gamma);
    }
    out
}

// ∏_{j ∈ C} (x - γ^j), pulled back to F_q.
fn coset_polynomial(root: &RootOfUnity, powers: &[ExtElem], base: &Fq, coset: &Coset) -> Result<FqPoly> {
    let ext = &root.field;
    let mut acc: Vec<ExtElem> = vec![ext.one()];
    for &j in &coset.elements {
        let r = &powers[j as usize];
        let mut next: Vec<ExtElem> = vec![Vec::new(); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] = ext.add(&next[i + 1], c);
            next[i] = ext.sub(&next[i], &ext.mul(c, r));
        }
        acc = next;
    }
    let coeffs = acc
        .iter()
        .map(|c| {
            ext.to_base(c).ok_or_else(|| {
                Error::Internal(format!(
                    "coefficient outside F_{} for coset {}",
                    base.order(),
                    coset.representative
                ))
            })
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(FqPoly::from_raw(base.clone(), coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyfq::factor::is_irreducible;
    use crate::polyfq::poly::poly_mul;

    fn coeffs(codes: &[MinimalCode]) -> Vec<Vec<u64>> {
        codes.iter().map(|c| c.parity_check.coeffs().to_vec()).collect()
    }

    #[test]
    fn length_seven_binary() {
        let codes = minimal_codes(7, 2, 0).unwrap();
        assert_eq!(coeffs(&codes), vec![vec![1, 1], vec![1, 1, 0, 1], vec![1, 0, 1, 1]]);
        let reps: Vec<u64> = codes.iter().map(|c| c.coset.representative).collect();
        assert_eq!(reps, vec![0, 1, 3]);
        assert_eq!(codes[1].coset.elements, vec![1, 2, 4]);
        assert_eq!(codes[2].coset.elements, vec![3, 5, 6]);
    }

    #[test]
    fn length_four_ternary() {
        let codes = minimal_codes(4, 3, 0).unwrap();
        // x - 1, x^2 + 1, x + 1 for cosets {0}, {1, 3}, {2}
        assert_eq!(coeffs(&codes), vec![vec![2, 1], vec![1, 0, 1], vec![1, 1]]);
    }

    #[test]
    fn length_one() {
        let codes = minimal_codes(1, 2, 0).unwrap();
        assert_eq!(codes.len(), 1);
        assert_eq!(codes[0].parity_check.coeffs(), &[1, 1]);
        assert!(codes[0].generator.is_one());
    }

    #[test]
    fn generator_times_parity_check() {
        for (n, q) in [(21u64, 4u64), (26, 3), (13, 9)] {
            let codes = minimal_codes(n, q, 1).unwrap();
            let f = Fq::new(q).unwrap();
            let xn = FqPoly::x_pow_minus_one(f.clone(), n as usize);
            let mut all = FqPoly::one(f);
            for c in &codes {
                assert_eq!(poly_mul(&c.generator, &c.parity_check).unwrap(), xn);
                assert_eq!(c.parity_check.degree(), Some(c.dimension()));
                assert!(is_irreducible(&c.parity_check).unwrap());
                all = poly_mul(&all, &c.parity_check).unwrap();
            }
            assert_eq!(all, xn);
        }
    }

    #[test]
    fn records_over_composite_fields_use_digits() {
        let codes = minimal_codes(3, 4, 0).unwrap();
        let recs: Vec<CodeRecord> = codes.iter().map(MinimalCode::to_record).collect();
        assert_eq!(recs.len(), 3);
        assert!(recs.iter().all(|r| r.dimension == 1));
        // x - 1 = x + 1 over F_4
        assert_eq!(
            recs[0].parity_check,
            vec![Coefficient::Digits(vec![1, 0]), Coefficient::Digits(vec![1, 0])]
        );
        let text = serde_json::to_string(&recs).unwrap();
        assert_eq!(serde_json::from_str::<Vec<CodeRecord>>(&text).unwrap(), recs);
        let prime = minimal_codes(7, 2, 0).unwrap()[1].to_record();
        assert_eq!(serde_json::to_string(&prime.parity_check).unwrap(), "[1,1,0,1]");
    }

    #[test]
    fn budget_refusal() {
        let tight = Budget {
            enumeration: 1000,
            construction: 10,
        };
        assert!(matches!(
            minimal_codes_with_budget(7, 2, 0, tight),
            Err(Error::ConstructionBudget { cost: 21, budget: 10 })
        ));
    }
}
