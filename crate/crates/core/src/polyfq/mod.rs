//! Polynomials over `F_q` (`q = p^e`), factorization of `x^n - 1` and the
//! construction of minimal cyclic codes from an explicit root of unity.

mod codes;
mod extension;
mod factor;
mod field;
mod poly;

pub use codes::{minimal_codes, minimal_codes_with_budget, CodeRecord, Coefficient, MinimalCode};
pub use extension::{find_root_of_unity, ExtElem, ExtensionField, RootOfUnity};
pub use factor::{ddf, edf, factor_squarefree, is_irreducible};
pub use field::{Fq, MAX_COMPOSITE_ORDER};
pub use poly::{poly_add, poly_div_exact, poly_divrem, poly_gcd, poly_mul, poly_rem, poly_sub, FqPoly};
