//! Counting and constructing minimal cyclic codes of length `n` over `F_q`.
//!
//! A minimal cyclic `[n, k; q]` code corresponds to an irreducible factor of
//! degree `k` of `x^n - 1` in `F_q[x]`. This crate computes the full dimension
//! spectrum three independent ways (divisor sums of multiplicative orders,
//! cyclotomic cosets, and explicit polynomial factorization), evaluates the
//! known closed-form counting formulas against them, and builds the
//! generator / parity-check pair of every minimal code.

pub mod arith;
pub mod audit;
mod budget;
mod error;
pub mod orders;
pub mod polyfq;
pub mod spectrum;

pub use budget::Budget;
pub use error::{Error, Result};

/// Exact rational used for closed-form values that may fail to be integral.
pub type Rational = num_rational::Ratio<i128>;
