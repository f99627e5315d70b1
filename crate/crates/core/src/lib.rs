//! Exact tools for the sum-of-proper-divisors function `s(n) = σ(n) − n`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: factorization, σ, s and friends, plus the algebraic identities
//!   that the constructions rely on, exposed as independently-evaluated checks.
//! * [`sieve`]: a segmented range sieve producing σ(n), s(n) and the smallest
//!   prime factor for every n in a range, with a parallel scan driver.
//! * [`fiber`]: complete s-preimages, semiprime preimages and untouchable numbers.
//! * [`construct`]: desk-scale collision witnesses for `(bp+a)(bq+a)` and the
//!   clustered-preimage and `σ(n) = kn + a` constructions built on them.
//! * [`kna`]: regular/sporadic classification for `σ(n) = kn + a` and censuses
//!   of the congruence `σ(n) ≡ a (mod n)`.
//! * [`experiments`]: exceptional-set classification and preimage counts for
//!   sparse target sets.
//!
//! All integer work is exact. Ratios are compared through [`Rational`] or by
//! cross-multiplication, never through floating point.

pub mod arith;
pub mod construct;
pub mod error;
pub mod experiments;
pub mod fiber;
pub mod kna;
pub mod rational;
pub mod sieve;

pub use error::{Error, Result};

/// Exact rational used for user-facing ratio parameters (α, ε).
pub type Rational = num_rational::Ratio<i128>;

/// Arbitrary-precision rational for comparisons whose cross products can
/// leave the 128-bit range.
pub type BigRational = num_rational::BigRational;
