//! Ring construction and exact arithmetic.
//!
//! Rings come in two realizations:
//!
//! * **tabulated** — a finite ring with fully materialized Cayley tables
//!   (addition, multiplication, negation), order at most
//!   [`MAX_TABULATED_ORDER`]; every verification loop over such a ring is a
//!   table lookup;
//! * **structural** — the 2x2 matrix ring over exact rationals, on which
//!   arithmetic is performed directly and quantified checks sample a
//!   deterministic grid plus seeded random matrices.

use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::mat2::{mat2q_from_str, Mat2};
use crate::report::{DefectReport, IdentityWitness};
use crate::{Mat2q, Rat};

/// Largest supported order for a tabulated ring.
pub const MAX_TABULATED_ORDER: usize = 256;

/// Recipe for building a ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// Integers modulo `n`, `n >= 2`.
    Zn { n: usize },
    /// Full ring of 2x2 matrices over a finite base ring.
    Matrix2 { base: Box<RingSpec> },
    /// Upper-triangular 2x2 matrices over a finite base ring.
    UpperTriangular2 { base: Box<RingSpec> },
    /// Direct product with componentwise operations.
    Product {
        left: Box<RingSpec>,
        right: Box<RingSpec>,
    },
    /// Structural 2x2 matrix ring over exact rationals (infinite carrier).
    RationalMatrix2,
    /// Escape hatch for rings supplied as raw tables (test fixtures).
    Custom { name: String, order: usize },
}

impl RingSpec {
    pub fn zn(n: usize) -> Self {
        RingSpec::Zn { n }
    }

    pub fn matrix2(base: RingSpec) -> Self {
        RingSpec::Matrix2 { base: Box::new(base) }
    }

    pub fn upper_triangular2(base: RingSpec) -> Self {
        RingSpec::UpperTriangular2 { base: Box::new(base) }
    }

    pub fn product(left: RingSpec, right: RingSpec) -> Self {
        RingSpec::Product {
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// True if the spec yields a tabulated (finite) ring.
    pub fn is_finite(&self) -> bool {
        !matches!(self, RingSpec::RationalMatrix2)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Zn { n } => write!(f, "zn:{n}"),
            RingSpec::Matrix2 { base } => write!(f, "m2:{base}"),
            RingSpec::UpperTriangular2 { base } => write!(f, "ut2:{base}"),
            RingSpec::Product { left, right } => write!(f, "prod({left},{right})"),
            RingSpec::RationalMatrix2 => write!(f, "qm2"),
            RingSpec::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

impl std::str::FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parser = SpecParser { src: s, pos: 0 };
        let spec = parser.spec()?;
        parser.expect_end()?;
        Ok(spec)
    }
}

/// Recursive-descent parser for the ring-spec grammar:
/// `zn:N | m2:SPEC | ut2:SPEC | prod(SPEC,SPEC) | qm2`.
struct SpecParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> SpecParser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn error(&self, expected: &str) -> Error {
        let found: String = self.rest().chars().take(12).collect();
        Error::Parse {
            position: self.pos,
            expected: expected.into(),
            found: if found.is_empty() { "end of input".into() } else { found },
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("`{token}`")))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("end of input"))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let digits: String = self.rest().chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(self.error("a number"));
        }
        self.pos += digits.len();
        digits.parse().map_err(|_| self.error("a number in range"))
    }

    fn spec(&mut self) -> Result<RingSpec> {
        if self.eat("zn:") {
            Ok(RingSpec::Zn { n: self.number()? })
        } else if self.eat("m2:") {
            Ok(RingSpec::matrix2(self.spec()?))
        } else if self.eat("ut2:") {
            Ok(RingSpec::upper_triangular2(self.spec()?))
        } else if self.eat("prod(") {
            let left = self.spec()?;
            self.expect(",")?;
            let right = self.spec()?;
            self.expect(")")?;
            Ok(RingSpec::product(left, right))
        } else if self.eat("qm2") {
            Ok(RingSpec::RationalMatrix2)
        } else {
            Err(self.error("one of zn:, m2:, ut2:, prod(, qm2"))
        }
    }
}

impl Serialize for RingSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RingSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Opaque ring identity; equal specs produce equal ids, so elements of two
/// independently built copies of the same ring are interchangeable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingId(u64);

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Element payload: a table index or an exact-rational 2x2 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Index(usize),
    Matrix(Mat2q),
}

/// A value of a specific ring.
#[derive(Debug, Clone)]
pub struct Element {
    ring_id: RingId,
    ring_literal: Arc<str>,
    payload: Payload,
}

impl Element {
    pub fn ring_id(&self) -> RingId {
        self.ring_id
    }

    pub fn payload(&self) -> &Payload {
        &self.payload
    }

    /// Table index of a tabulated element.
    pub fn index(&self) -> Option<usize> {
        match self.payload {
            Payload::Index(i) => Some(i),
            Payload::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&Mat2q> {
        match &self.payload {
            Payload::Matrix(m) => Some(m),
            Payload::Index(_) => None,
        }
    }

    pub fn value_string(&self) -> String {
        match &self.payload {
            Payload::Index(i) => i.to_string(),
            Payload::Matrix(m) => m.to_string(),
        }
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.ring_id == other.ring_id && self.payload == other.payload
    }
}

impl Eq for Element {}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.payload.cmp(&other.payload)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value_string())
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    ring: String,
    value: String,
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ElementRepr {
            ring: self.ring_literal.to_string(),
            value: self.value_string(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Element {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ElementRepr::deserialize(deserializer)?;
        let payload = if repr.value.trim_start().starts_with('[') {
            Payload::Matrix(mat2q_from_str(&repr.value).map_err(D::Error::custom)?)
        } else {
            Payload::Index(repr.value.parse().map_err(D::Error::custom)?)
        };
        Ok(Element {
            ring_id: RingId(fnv1a(&repr.ring)),
            ring_literal: repr.ring.into(),
            payload,
        })
    }
}

/// Fully materialized Cayley tables of a finite ring.
///
/// The negation table is materialized even though it is derivable so that
/// inner search loops stay allocation-free and branch-light.
#[derive(Debug, Clone)]
pub struct TableRing {
    order: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    neg: Vec<usize>,
    zero: usize,
    one: usize,
}

impl TableRing {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    #[inline(always)]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.order + y]
    }

    #[inline(always)]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul[x * self.order + y]
    }

    #[inline(always)]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    #[inline(always)]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg(y))
    }
}

/// How the ring's arithmetic is realized. Tables are shared, so cloning a
/// ring is cheap and rings can move freely between worker threads.
#[derive(Debug, Clone)]
pub enum Realization {
    Tabulated(Arc<TableRing>),
    Structural,
}

/// A unital ring with exact arithmetic.
#[derive(Debug, Clone)]
pub struct Ring {
    id: RingId,
    literal: Arc<str>,
    spec: RingSpec,
    realization: Realization,
}

/// An idempotent found by [`Ring::find_idempotents`], flagged as trivial
/// when it equals 0 or 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdempotentInfo {
    pub element: Element,
    pub trivial: bool,
}

fn check_order(order: usize, what: &'static str) -> Result<()> {
    if order > MAX_TABULATED_ORDER {
        Err(Error::OrderBound {
            order,
            bound: MAX_TABULATED_ORDER,
            what,
        })
    } else {
        Ok(())
    }
}

fn build_table(spec: &RingSpec) -> Result<TableRing> {
    match spec {
        RingSpec::Zn { n } => {
            let n = *n;
            if n < 2 {
                return Err(Error::InvalidSpec {
                    field: "zn.n".into(),
                    reason: "n >= 2 required".into(),
                });
            }
            check_order(n, "zn")?;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for x in 0..n {
                for y in 0..n {
                    add[x * n + y] = (x + y) % n;
                    mul[x * n + y] = (x * y) % n;
                }
            }
            let neg = (0..n).map(|x| (n - x) % n).collect();
            Ok(TableRing {
                order: n,
                add,
                mul,
                neg,
                zero: 0,
                one: 1,
            })
        }
        RingSpec::Product { left, right } => {
            let lt = build_table(left)?;
            let rt = build_table(right)?;
            let (ln, rn) = (lt.order, rt.order);
            let n = ln
                .checked_mul(rn)
                .ok_or(Error::OrderBound {
                    order: usize::MAX,
                    bound: MAX_TABULATED_ORDER,
                    what: "prod",
                })?;
            check_order(n, "prod")?;
            let pack = |l: usize, r: usize| l * rn + r;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            let mut neg = vec![0; n];
            for l in 0..ln {
                for r in 0..rn {
                    let x = pack(l, r);
                    neg[x] = pack(lt.neg(l), rt.neg(r));
                    for l2 in 0..ln {
                        for r2 in 0..rn {
                            let y = pack(l2, r2);
                            add[x * n + y] = pack(lt.add(l, l2), rt.add(r, r2));
                            mul[x * n + y] = pack(lt.mul(l, l2), rt.mul(r, r2));
                        }
                    }
                }
            }
            Ok(TableRing {
                order: n,
                add,
                mul,
                neg,
                zero: pack(lt.zero, rt.zero),
                one: pack(lt.one, rt.one),
            })
        }
        RingSpec::Matrix2 { base } => {
            if !base.is_finite() {
                return Err(Error::InvalidSpec {
                    field: "m2.base".into(),
                    reason: "base must be a finite (tabulated) ring".into(),
                });
            }
            let bt = build_table(base)?;
            let b = bt.order;
            let n = b * b * b * b;
            check_order(n, "m2")?;
            // index = ((a*b + c1) * b + c2) * b + d for [[a, c1], [c2, d]]
            let pack = |e: [usize; 4]| ((e[0] * b + e[1]) * b + e[2]) * b + e[3];
            let unpack = |x: usize| {
                [
                    x / (b * b * b),
                    (x / (b * b)) % b,
                    (x / b) % b,
                    x % b,
                ]
            };
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            let mut neg = vec![0; n];
            for x in 0..n {
                let u = unpack(x);
                neg[x] = pack([bt.neg(u[0]), bt.neg(u[1]), bt.neg(u[2]), bt.neg(u[3])]);
                for y in 0..n {
                    let v = unpack(y);
                    add[x * n + y] = pack([
                        bt.add(u[0], v[0]),
                        bt.add(u[1], v[1]),
                        bt.add(u[2], v[2]),
                        bt.add(u[3], v[3]),
                    ]);
                    mul[x * n + y] = pack([
                        bt.add(bt.mul(u[0], v[0]), bt.mul(u[1], v[2])),
                        bt.add(bt.mul(u[0], v[1]), bt.mul(u[1], v[3])),
                        bt.add(bt.mul(u[2], v[0]), bt.mul(u[3], v[2])),
                        bt.add(bt.mul(u[2], v[1]), bt.mul(u[3], v[3])),
                    ]);
                }
            }
            Ok(TableRing {
                order: n,
                add,
                mul,
                neg,
                zero: pack([bt.zero; 4]),
                one: pack([bt.one, bt.zero, bt.zero, bt.one]),
            })
        }
        RingSpec::UpperTriangular2 { base } => {
            if !base.is_finite() {
                return Err(Error::InvalidSpec {
                    field: "ut2.base".into(),
                    reason: "base must be a finite (tabulated) ring".into(),
                });
            }
            let bt = build_table(base)?;
            let b = bt.order;
            let n = b * b * b;
            check_order(n, "ut2")?;
            // index = (a*b + c) * b + d for [[a, c], [0, d]]
            let pack = |a: usize, c: usize, d: usize| (a * b + c) * b + d;
            let unpack = |x: usize| (x / (b * b), (x / b) % b, x % b);
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            let mut neg = vec![0; n];
            for x in 0..n {
                let (a1, c1, d1) = unpack(x);
                neg[x] = pack(bt.neg(a1), bt.neg(c1), bt.neg(d1));
                for y in 0..n {
                    let (a2, c2, d2) = unpack(y);
                    add[x * n + y] = pack(bt.add(a1, a2), bt.add(c1, c2), bt.add(d1, d2));
                    mul[x * n + y] = pack(
                        bt.mul(a1, a2),
                        bt.add(bt.mul(a1, c2), bt.mul(c1, d2)),
                        bt.mul(d1, d2),
                    );
                }
            }
            Ok(TableRing {
                order: n,
                add,
                mul,
                neg,
                zero: pack(bt.zero, bt.zero, bt.zero),
                one: pack(bt.one, bt.zero, bt.one),
            })
        }
        RingSpec::RationalMatrix2 => Err(Error::InvalidSpec {
            field: "spec".into(),
            reason: "qm2 is structural, not tabulated".into(),
        }),
        RingSpec::Custom { name, .. } => Err(Error::InvalidSpec {
            field: "spec".into(),
            reason: format!("custom ring `{name}` has no buildable tables"),
        }),
    }
}

impl Ring {
    /// Builds the ring described by `spec`. Tabulated realizations have fully
    /// materialized tables; `qm2` returns the structural rational matrix ring.
    pub fn new(spec: RingSpec) -> Result<Ring> {
        let literal: Arc<str> = spec.to_string().into();
        let id = RingId(fnv1a(&literal));
        let realization = match &spec {
            RingSpec::RationalMatrix2 => Realization::Structural,
            _ => Realization::Tabulated(Arc::new(build_table(&spec)?)),
        };
        Ok(Ring {
            id,
            literal,
            spec,
            realization,
        })
    }

    /// Wraps caller-supplied tables without validating the ring axioms
    /// (that is [`Ring::validate_axioms`]' job). Intended for fixtures.
    pub fn from_tables(
        name: &str,
        add: Vec<usize>,
        mul: Vec<usize>,
        neg: Vec<usize>,
        zero: usize,
        one: usize,
    ) -> Result<Ring> {
        let order = neg.len();
        check_order(order, "custom")?;
        if add.len() != order * order || mul.len() != order * order {
            return Err(Error::InvalidSpec {
                field: "tables".into(),
                reason: "add/mul tables must have order^2 entries".into(),
            });
        }
        if zero >= order || one >= order {
            return Err(Error::InvalidSpec {
                field: "zero/one".into(),
                reason: "identity indices out of range".into(),
            });
        }
        if let Some(bad) = add.iter().chain(&mul).chain(&neg).find(|&&v| v >= order) {
            return Err(Error::InvalidSpec {
                field: "tables".into(),
                reason: format!("table entry {bad} out of range"),
            });
        }
        let spec = RingSpec::Custom {
            name: name.to_string(),
            order,
        };
        let literal: Arc<str> = spec.to_string().into();
        Ok(Ring {
            id: RingId(fnv1a(&literal)),
            literal,
            spec,
            realization: Realization::Tabulated(Arc::new(TableRing {
                order,
                add,
                mul,
                neg,
                zero,
                one,
            })),
        })
    }

    pub fn id(&self) -> RingId {
        self.id
    }

    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn literal(&self) -> &str {
        &self.literal
    }

    /// The Cayley tables, if this ring is tabulated.
    pub fn table(&self) -> Option<&TableRing> {
        match &self.realization {
            Realization::Tabulated(t) => Some(t),
            Realization::Structural => None,
        }
    }

    pub fn is_structural(&self) -> bool {
        matches!(self.realization, Realization::Structural)
    }

    pub fn order(&self) -> Option<usize> {
        self.table().map(TableRing::order)
    }

    pub fn require_table(&self, op: &'static str) -> Result<&TableRing> {
        self.table().ok_or(Error::UnsupportedStructural { op })
    }

    fn wrap(&self, payload: Payload) -> Element {
        Element {
            ring_id: self.id,
            ring_literal: Arc::clone(&self.literal),
            payload,
        }
    }

    /// Element from a table index.
    pub fn element(&self, index: usize) -> Result<Element> {
        let t = self.require_table("element-by-index")?;
        if index >= t.order {
            return Err(Error::InvalidSpec {
                field: "index".into(),
                reason: format!("index {index} out of range for order {}", t.order),
            });
        }
        Ok(self.wrap(Payload::Index(index)))
    }

    /// Element from a rational 2x2 matrix (structural ring only).
    pub fn matrix_element(&self, m: Mat2q) -> Result<Element> {
        match self.realization {
            Realization::Structural => Ok(self.wrap(Payload::Matrix(m))),
            Realization::Tabulated(_) => Err(Error::UnsupportedTabulated {
                op: "matrix-element",
            }),
        }
    }

    pub fn zero(&self) -> Element {
        match &self.realization {
            Realization::Tabulated(t) => self.wrap(Payload::Index(t.zero)),
            Realization::Structural => self.wrap(Payload::Matrix(Mat2::zero())),
        }
    }

    pub fn one(&self) -> Element {
        match &self.realization {
            Realization::Tabulated(t) => self.wrap(Payload::Index(t.one)),
            Realization::Structural => self.wrap(Payload::Matrix(Mat2::one())),
        }
    }

    /// All elements of a tabulated ring in index order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        let t = self.require_table("elements")?;
        Ok((0..t.order).map(|i| self.wrap(Payload::Index(i))).collect())
    }

    pub fn owns(&self, x: &Element) -> bool {
        x.ring_id == self.id
    }

    fn check_owned(&self, x: &Element) -> Result<()> {
        if self.owns(x) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn binary(&self, x: &Element, y: &Element, f_idx: impl Fn(&TableRing, usize, usize) -> usize, f_mat: impl Fn(&Mat2q, &Mat2q) -> Mat2q) -> Result<Element> {
        self.check_owned(x)?;
        self.check_owned(y)?;
        match (&self.realization, &x.payload, &y.payload) {
            (Realization::Tabulated(t), Payload::Index(a), Payload::Index(b)) => {
                Ok(self.wrap(Payload::Index(f_idx(t, *a, *b))))
            }
            (Realization::Structural, Payload::Matrix(a), Payload::Matrix(b)) => {
                Ok(self.wrap(Payload::Matrix(f_mat(a, b))))
            }
            _ => Err(Error::RingMismatch),
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.binary(x, y, TableRing::add, Mat2::add)
    }

    pub fn mul(&self, x: &Element, y: &Element) -> Result<Element> {
        self.binary(x, y, TableRing::mul, Mat2::mul)
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        self.binary(x, y, TableRing::sub, Mat2::sub)
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.check_owned(x)?;
        match (&self.realization, &x.payload) {
            (Realization::Tabulated(t), Payload::Index(a)) => {
                Ok(self.wrap(Payload::Index(t.neg(*a))))
            }
            (Realization::Structural, Payload::Matrix(a)) => {
                Ok(self.wrap(Payload::Matrix(a.neg())))
            }
            _ => Err(Error::RingMismatch),
        }
    }

    /// Structural equality of two elements of this ring.
    pub fn eq(&self, x: &Element, y: &Element) -> Result<bool> {
        self.check_owned(x)?;
        self.check_owned(y)?;
        Ok(x.payload == y.payload)
    }

    pub fn is_zero(&self, x: &Element) -> bool {
        x.payload == self.zero().payload
    }

    /// All idempotents of a tabulated ring, sorted by table index, each
    /// flagged as trivial (0 or 1) or non-trivial.
    pub fn find_idempotents(&self) -> Result<Vec<IdempotentInfo>> {
        let t = self.require_table("find_idempotents")?;
        let mut out = Vec::new();
        for e in 0..t.order {
            if t.mul(e, e) == e {
                out.push(IdempotentInfo {
                    element: self.wrap(Payload::Index(e)),
                    trivial: e == t.zero || e == t.one,
                });
            }
        }
        Ok(out)
    }

    /// Finite-ring primeness: for all non-zero `a`, `b` there is an `r`
    /// with `a*r*b != 0`, decided by triple scan.
    pub fn is_prime(&self) -> Result<bool> {
        let t = self.require_table("is_prime")?;
        let n = t.order;
        for a in 0..n {
            if a == t.zero {
                continue;
            }
            'b: for b in 0..n {
                if b == t.zero {
                    continue;
                }
                for r in 0..n {
                    if t.mul(t.mul(a, r), b) != t.zero {
                        continue 'b;
                    }
                }
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks the ring axioms. Tabulated rings are scanned exhaustively;
    /// the structural ring is checked on a deterministic integer grid plus
    /// `sample_budget` seeded random rational triples (sound but incomplete:
    /// an empty report means no defect was found within that domain).
    pub fn validate_axioms(&self, sample_budget: u32) -> DefectReport {
        let mut report = DefectReport::new("ring_axioms");
        match &self.realization {
            Realization::Tabulated(t) => self.validate_axioms_table(t, &mut report),
            Realization::Structural => self.validate_axioms_structural(sample_budget, &mut report),
        }
        report
    }

    fn validate_axioms_table(&self, t: &TableRing, report: &mut DefectReport) {
        let n = t.order;
        let el = |i: usize| self.wrap(Payload::Index(i));
        let fail = |name: &str, x: usize, y: Option<usize>, z: Option<usize>, lhs: usize, rhs: usize, report: &mut DefectReport| {
            report.witness(IdentityWitness {
                identity: name.into(),
                x: el(x),
                y: y.map(el),
                z: z.map(el),
                lhs: el(lhs),
                rhs: el(rhs),
            });
        };
        for x in 0..n {
            report.pairs_checked += 1;
            let checks = [
                ("zero_right_identity", t.add(x, t.zero), x),
                ("zero_left_identity", t.add(t.zero, x), x),
                ("additive_inverse", t.add(x, t.neg(x)), t.zero),
                ("one_right_identity", t.mul(x, t.one), x),
                ("one_left_identity", t.mul(t.one, x), x),
            ];
            for (name, lhs, rhs) in checks {
                if lhs != rhs {
                    fail(name, x, None, None, lhs, rhs, report);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                report.pairs_checked += 1;
                let (lhs, rhs) = (t.add(x, y), t.add(y, x));
                if lhs != rhs {
                    fail("add_commutative", x, Some(y), None, lhs, rhs, report);
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    report.pairs_checked += 1;
                    let triples = [
                        ("add_associative", t.add(t.add(x, y), z), t.add(x, t.add(y, z))),
                        ("mul_associative", t.mul(t.mul(x, y), z), t.mul(x, t.mul(y, z))),
                        ("left_distributive", t.mul(x, t.add(y, z)), t.add(t.mul(x, y), t.mul(x, z))),
                        ("right_distributive", t.mul(t.add(x, y), z), t.add(t.mul(x, z), t.mul(y, z))),
                    ];
                    for (name, lhs, rhs) in triples {
                        if lhs != rhs {
                            fail(name, x, Some(y), Some(z), lhs, rhs, report);
                            if report.witnesses.len() >= crate::report::WITNESS_CAP {
                                return;
                            }
                        }
                    }
                }
            }
        }
    }

    fn validate_axioms_structural(&self, sample_budget: u32, report: &mut DefectReport) {
        use crate::domain::{grid_matrices, random_matrices};
        let wide = grid_matrices(2);
        // Triple-quantified axioms use the tighter grid; the full +-2 grid
        // would cost 625^3 evaluations.
        let narrow = grid_matrices(1);
        let fail = |name: &str, x: &Mat2q, y: Option<&Mat2q>, z: Option<&Mat2q>, lhs: Mat2q, rhs: Mat2q, report: &mut DefectReport| {
            report.witness(IdentityWitness {
                identity: name.into(),
                x: self.wrap(Payload::Matrix(*x)),
                y: y.map(|m| self.wrap(Payload::Matrix(*m))),
                z: z.map(|m| self.wrap(Payload::Matrix(*m))),
                lhs: self.wrap(Payload::Matrix(lhs)),
                rhs: self.wrap(Payload::Matrix(rhs)),
            });
        };
        for x in &wide {
            report.pairs_checked += 1;
            let id = Mat2q::one();
            let zero = Mat2q::zero();
            let checks = [
                ("zero_right_identity", x.add(&zero), *x),
                ("additive_inverse", x.add(&x.neg()), zero),
                ("one_right_identity", x.mul(&id), *x),
                ("one_left_identity", id.mul(x), *x),
            ];
            for (name, lhs, rhs) in checks {
                if lhs != rhs {
                    fail(name, x, None, None, lhs, rhs, report);
                }
            }
        }
        for x in &wide {
            for y in &wide {
                report.pairs_checked += 1;
                let (lhs, rhs) = (x.add(y), y.add(x));
                if lhs != rhs {
                    fail("add_commutative", x, Some(y), None, lhs, rhs, report);
                }
            }
        }
        let triple = |x: &Mat2q, y: &Mat2q, z: &Mat2q, report: &mut DefectReport| {
            report.pairs_checked += 1;
            let triples = [
                ("add_associative", x.add(y).add(z), x.add(&y.add(z))),
                ("mul_associative", x.mul(y).mul(z), x.mul(&y.mul(z))),
                ("left_distributive", x.mul(&y.add(z)), x.mul(y).add(&x.mul(z))),
                ("right_distributive", x.add(y).mul(z), x.mul(z).add(&y.mul(z))),
            ];
            for (name, lhs, rhs) in triples {
                if lhs != rhs {
                    fail(name, x, Some(y), Some(z), lhs, rhs, report);
                }
            }
        };
        for x in &narrow {
            for y in &narrow {
                for z in &narrow {
                    triple(x, y, z, report);
                }
            }
        }
        let randoms = random_matrices(0xA110_5EED, 3 * sample_budget as usize);
        for chunk in randoms.chunks_exact(3) {
            triple(&chunk[0], &chunk[1], &chunk[2], report);
        }
    }
}

/// Convenience constructors for the structural rational matrix ring.
impl Ring {
    /// Matrix unit E_ij as an element of the structural ring.
    pub fn matrix_unit(&self, i: u8, j: u8) -> Result<Element> {
        self.matrix_element(Mat2::unit(i, j))
    }

    /// Integer-entry matrix element of the structural ring.
    pub fn matrix_from_ints(&self, a: i64, b: i64, c: i64, d: i64) -> Result<Element> {
        self.matrix_element(Mat2::new(
            Rat::from_integer(a),
            Rat::from_integer(b),
            Rat::from_integer(c),
            Rat::from_integer(d),
        ))
    }
}
