//! Report types shared by the checkers.
//!
//! Field names of everything here are part of the stable JSON-lines schema
//! (see `docs/report-schema.md` at the repository root); changes must be
//! additive only.

use serde::{Deserialize, Serialize};

use crate::ring::Element;

/// Maximum number of witnesses collected per identity check.
pub const WITNESS_CAP: usize = 8;

/// Three-valued check outcome. `Unknown` is used where a property cannot be
/// decided on an infinite carrier (e.g. bijectivity of an arbitrary
/// structural map).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::Holds
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Unknown => "unknown",
        })
    }
}

/// A concrete violation of a named identity: both sides re-evaluate to
/// `lhs != rhs` at the recorded point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityWitness {
    pub identity: String,
    pub x: Element,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub y: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub z: Option<Element>,
    pub lhs: Element,
    pub rhs: Element,
}

/// Verdict for one precondition of a check, reported distinctly from the
/// identity verdict itself (never silently assumed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Precondition {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

/// Outcome of a quantified identity check.
///
/// `holds` is true iff no precondition failed and no witness was found within
/// the checked domain. On structural rings the domain is a grid plus random
/// samples, so `holds` means "no counterexample found"; `pairs_checked`
/// records the coverage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectReport {
    pub check: String,
    pub holds: bool,
    pub preconditions: Vec<Precondition>,
    pub witnesses: Vec<IdentityWitness>,
    pub pairs_checked: u64,
}

impl DefectReport {
    pub fn new(check: impl Into<String>) -> Self {
        DefectReport {
            check: check.into(),
            holds: true,
            preconditions: Vec::new(),
            witnesses: Vec::new(),
            pairs_checked: 0,
        }
    }

    pub fn precondition(&mut self, name: impl Into<String>, verdict: Verdict, detail: Option<String>) {
        if verdict == Verdict::Fails {
            self.holds = false;
        }
        self.preconditions.push(Precondition {
            name: name.into(),
            verdict,
            detail,
        });
    }

    /// Records a witness, capped at [`WITNESS_CAP`] per identity name;
    /// always marks the report failed.
    pub fn witness(&mut self, w: IdentityWitness) {
        self.holds = false;
        let same = self
            .witnesses
            .iter()
            .filter(|e| e.identity == w.identity)
            .count();
        if same < WITNESS_CAP {
            self.witnesses.push(w);
        }
    }
}

/// Classification of a single self-map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapKindReport {
    pub additive: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub additive_witness: Option<(Element, Element)>,
    pub zero_preserving: bool,
    pub multiplicative: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub multiplicative_witness: Option<(Element, Element)>,
    pub unit_preserving: bool,
    pub endomorphism: bool,
    pub automorphism: Verdict,
    pub pairs_checked: u64,
}

/// Witness for a failed hypothesis clause: the recorded `(a, b)` satisfy the
/// quantified hypothesis over `x_range` while the conclusion fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseWitness {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub i: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub j: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub b: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub x_range: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lhs: Option<Element>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rhs: Option<Element>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clause {
    pub id: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<ClauseWitness>,
}

/// Per-clause verdicts for one hypothesis family.
///
/// `overall` is the conjunction of the clauses, except for the
/// three-of-four corollary family where it is `satisfied_count >= 3`
/// (the paper asks for three of the four conditions without naming which).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub family: String,
    pub clauses: Vec<Clause>,
    pub overall: bool,
    pub satisfied_count: usize,
}

impl AssumptionReport {
    pub fn conjunction(family: impl Into<String>, clauses: Vec<Clause>) -> Self {
        let satisfied = clauses.iter().filter(|c| c.holds).count();
        let overall = satisfied == clauses.len();
        AssumptionReport {
            family: family.into(),
            clauses,
            overall,
            satisfied_count: satisfied,
        }
    }

    pub fn clause(&self, id: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.id == id)
    }
}
