use thiserror::Error;

use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be positive")]
    Zero,

    #[error("range exceeded: {0}")]
    RangeExceeded(String),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("gcd(n,q) must be 1 (n={n}, q={q})")]
    NotCoprime { n: u64, q: u64 },

    #[error("order undefined: {p} divides {q}")]
    OrderUndefined { p: u64, q: u64 },

    #[error("LTE hypotheses unmet: {0}")]
    LteHypotheses(String),

    #[error("hypotheses unmet: {0}")]
    HypothesesUnmet(String),

    #[error("{d} is not a valid divisor of {n}")]
    NotDivisor { d: u64, n: u64 },

    #[error("non-integral value {value} from {what}")]
    NonIntegral { what: String, value: Rational },

    #[error("closed form disagrees with the divisor count: {0}")]
    Discrepancy(String),

    #[error("enumeration too large, use divisor method ({size} > budget {budget})")]
    EnumerationBudget { size: u64, budget: u64 },

    #[error("construction refused: cost {cost} exceeds budget {budget} (set CCC_BUDGET to override)")]
    ConstructionBudget { cost: u64, budget: u64 },

    #[error("polynomials over different fields (q={0} vs q={1})")]
    FieldMismatch(u64, u64),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal error: {0}")]
    Internal(String),
}
