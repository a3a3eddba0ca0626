//! Exact-arithmetic computation in rings with non-trivial idempotents:
//! Peirce decompositions, classification of derivation-like self-maps
//! (multiplicative, generalized, skew, semi-), hypothesis checkers for the
//! additivity theorems, and pruned enumeration of multiplicative (generalized)
//! skew semi-derivations on small finite rings.
//!
//! Rings are either fully tabulated (Cayley tables, order <= 256) or the
//! structural 2x2 matrix ring over exact rationals. Everything quantified
//! over a tabulated ring is checked exhaustively; structural-ring checks run
//! on a deterministic integer grid plus seeded random rational matrices and
//! are therefore one-sided.

pub mod derivations;
pub mod domain;
pub mod error;
pub mod hypotheses;
pub mod maps;
pub mod mat2;
pub mod peirce;
pub mod report;
pub mod ring;
pub mod search;

/// Exact rational scalar used by the structural matrix ring.
pub type Rat = num_rational::Ratio<i64>;

/// 2x2 matrix over exact rationals.
pub type Mat2q = mat2::Mat2<Rat>;

pub use error::{Error, Result};
pub use ring::{Element, Ring, RingSpec};
