//! Quantifier domains for identity checks.
//!
//! Tabulated rings are scanned exhaustively. The structural rational matrix
//! ring is sampled on a deterministic integer grid plus seeded random
//! rational matrices; every check over such a domain is one-sided ("no
//! counterexample found"), and reports carry the pair count so callers can
//! judge coverage.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::{Mat2q, Rat};

/// Default half-width of the deterministic integer grid.
pub const DEFAULT_GRID_BOUND: i64 = 2;

/// Default number of seeded random samples added to the grid.
pub const DEFAULT_RANDOM_BUDGET: u32 = 64;

/// Realization of "for all x, y in R" in a check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum IdentityDomain {
    /// Every pair of a tabulated ring.
    Exhaustive,
    /// Integer grid with entries in `-grid_bound..=grid_bound`, plus
    /// `random_budget` seeded random rational matrices.
    GridRandom {
        grid_bound: i64,
        random_budget: u32,
        seed: u64,
    },
}

impl IdentityDomain {
    pub fn grid(seed: u64) -> Self {
        IdentityDomain::GridRandom {
            grid_bound: DEFAULT_GRID_BOUND,
            random_budget: DEFAULT_RANDOM_BUDGET,
            seed,
        }
    }

    /// The natural domain for a ring: exhaustive when tabulated.
    pub fn default_for(ring: &Ring, seed: u64) -> Self {
        if ring.is_structural() {
            IdentityDomain::grid(seed)
        } else {
            IdentityDomain::Exhaustive
        }
    }

    /// Checks the domain kind matches the ring realization.
    pub fn validate_for(&self, ring: &Ring) -> Result<()> {
        match (self, ring.is_structural()) {
            (IdentityDomain::Exhaustive, true) => Err(Error::DomainMismatch(
                "exhaustive domains require a tabulated ring",
            )),
            (IdentityDomain::GridRandom { .. }, false) => Err(Error::DomainMismatch(
                "grid domains apply to the structural ring only",
            )),
            _ => Ok(()),
        }
    }
}

/// All 2x2 matrices with integer entries in `-bound..=bound`, in
/// lexicographic entry order. `(2*bound + 1)^4` matrices.
pub fn grid_matrices(bound: i64) -> Vec<Mat2q> {
    let range = || (-bound..=bound).map(Rat::from_integer);
    let mut out = Vec::new();
    for a in range() {
        for b in range() {
            for c in range() {
                for d in range() {
                    out.push(Mat2q::new(a, b, c, d));
                }
            }
        }
    }
    out
}

/// `count` seeded random matrices with small rational entries
/// (numerators in -8..=8, denominators in 1..=4). Deterministic for a
/// fixed seed across platforms.
pub fn random_matrices(seed: u64, count: usize) -> Vec<Mat2q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entry = |rng: &mut ChaCha8Rng| {
        let numer = rng.random_range(-8i64..=8);
        let denom = rng.random_range(1i64..=4);
        Rat::new(numer, denom)
    };
    (0..count)
        .map(|_| {
            Mat2q::new(
                entry(&mut rng),
                entry(&mut rng),
                entry(&mut rng),
                entry(&mut rng),
            )
        })
        .collect()
}

/// Sample points of a `GridRandom` domain: the grid first, then the random
/// tail. Single-variable clauses iterate this; pair clauses iterate the
/// square of the grid plus `random_budget` random pairs.
pub fn structural_points(grid_bound: i64, random_budget: u32, seed: u64) -> Vec<Mat2q> {
    let mut pts = grid_matrices(grid_bound);
    pts.extend(random_matrices(seed, random_budget as usize));
    pts
}
