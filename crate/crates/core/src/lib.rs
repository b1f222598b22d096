//! Exact decision procedures for election attacks (manipulation, bribery,
//! and the standard control types) under a family of voting rules that
//! score ballots into vectors and decide winners by comparing components.
//!
//! The pipeline: enumerate the finitely many winning conditions for the
//! distinguished candidate as linear constraint systems over per-vote-type
//! count variables, then decide each system by exact integer feasibility.
//! Brute-force oracles over tiny instances provide independent ground truth.

pub mod attacks;
pub mod conditions;
pub mod election;
pub mod format;
pub mod gsr;
pub mod ilp;
pub mod oracle;
pub mod rules;
mod simplex;

pub mod cli;

#[cfg(test)]
pub(crate) mod testutil;

/// Exact rational scalar used throughout.
pub type Rat = num::BigRational;

pub(crate) fn rat(n: i64) -> Rat {
    Rat::from_integer(num::BigInt::from(n))
}

pub(crate) fn rat_u64(n: u64) -> Rat {
    Rat::from_integer(num::BigInt::from(n))
}
