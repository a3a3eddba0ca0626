//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by ring construction, map evaluation, and the search engine.
///
/// Predicate failures (an identity that does not hold, a hypothesis clause
/// that fails) are *not* errors; they are reported through the report types.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ring spec: {field}: {reason}")]
    InvalidSpec { field: String, reason: String },

    #[error("ring order {order} exceeds the supported bound {bound} for {what}")]
    OrderBound {
        order: usize,
        bound: usize,
        what: &'static str,
    },

    #[error("elements or maps from different rings were mixed in one operation")]
    RingMismatch,

    #[error("operation `{op}` is unsupported on a structural ring")]
    UnsupportedStructural { op: &'static str },

    #[error("operation `{op}` is unsupported on a tabulated ring")]
    UnsupportedTabulated { op: &'static str },

    #[error("image table has {got} entries, ring has order {expected}")]
    WrongImageCount { expected: usize, got: usize },

    #[error("element is not idempotent: e*e = {square} differs from e = {element}")]
    NotIdempotent { element: String, square: String },

    #[error("idempotent {element} is trivial (0 or 1); a non-trivial idempotent is required")]
    TrivialIdempotent { element: String },

    #[error("no non-trivial idempotent exists in this ring")]
    NoNontrivialIdempotent,

    #[error("coordinate for cell ({i},{j}) lies outside the cell: {element}")]
    CellViolation { i: u8, j: u8, element: String },

    #[error("unknown cell pattern `{0}`; expected pair:IJ+KL, prod:12, prod:21, or full")]
    UnknownPattern(String),

    #[error("map {role} must be an automorphism; verdict was {verdict}")]
    NotAutomorphism { role: &'static str, verdict: String },

    #[error("counterexample hunt requires at least one relaxation")]
    NoRelaxation,

    #[error("domain kind does not match the ring realization: {0}")]
    DomainMismatch(&'static str),

    #[error("parse error at byte {position}: expected {expected}, found `{found}`")]
    Parse {
        position: usize,
        expected: String,
        found: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
