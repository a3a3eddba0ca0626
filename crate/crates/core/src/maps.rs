//! Self-maps of a ring: tabulated, builtin structural, or compositions.
//!
//! Maps never own their ring; they carry its identity and are validated
//! against the ring at every use, which keeps cross-ring evaluation bugs out
//! of the search engine.

use std::fmt;
use std::sync::Arc;

use crate::domain::{grid_matrices, random_matrices};
use crate::error::{Error, Result};
use crate::mat2::rat_from_str;
use crate::report::{MapKindReport, Verdict};
use crate::ring::{Element, Ring, RingId, TableRing};
use crate::{Mat2q, Rat};

/// Builtin structural maps on the rational 2x2 matrix ring.
/// With J = E12 + E21 and D = diag(1, -1):
/// `flip` is x -> JxJ, `scaledflip:k` is x -> k(JxJ), `signconj` is x -> DxD.
#[derive(Debug, Clone, PartialEq)]
pub enum Builtin {
    Zero,
    Identity,
    FlipConj,
    ScaledFlip(Rat),
    SignConj,
}

impl Builtin {
    fn apply(&self, x: &Mat2q) -> Mat2q {
        match self {
            Builtin::Zero => Mat2q::zero(),
            Builtin::Identity => *x,
            Builtin::FlipConj => {
                let j = Mat2q::exchange();
                j.mul(x).mul(&j)
            }
            Builtin::ScaledFlip(k) => {
                let j = Mat2q::exchange();
                j.mul(x).mul(&j).scale(k)
            }
            Builtin::SignConj => {
                let d = Mat2q::sign_diag();
                d.mul(x).mul(&d)
            }
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Zero => f.write_str("zero"),
            Builtin::Identity => f.write_str("identity"),
            Builtin::FlipConj => f.write_str("flip"),
            Builtin::ScaledFlip(k) => {
                if k.denom() == &1 {
                    write!(f, "scaledflip:{}", k.numer())
                } else {
                    write!(f, "scaledflip:{}/{}", k.numer(), k.denom())
                }
            }
            Builtin::SignConj => f.write_str("signconj"),
        }
    }
}

#[derive(Debug, Clone)]
enum MapBody {
    Table(Arc<Vec<usize>>),
    Builtin(Builtin),
    Compose(Box<RingMap>, Box<RingMap>),
}

/// A total self-map of a ring with evaluable semantics.
#[derive(Debug, Clone)]
pub struct RingMap {
    ring_id: RingId,
    body: MapBody,
}

impl RingMap {
    /// Tabulated map from an image table of element indices.
    pub fn tabulated(ring: &Ring, images: Vec<usize>) -> Result<RingMap> {
        let t = ring.require_table("tabulated map")?;
        if images.len() != t.order() {
            return Err(Error::WrongImageCount {
                expected: t.order(),
                got: images.len(),
            });
        }
        if let Some(bad) = images.iter().find(|&&v| v >= t.order()) {
            return Err(Error::InvalidSpec {
                field: "images".into(),
                reason: format!("image index {bad} out of range"),
            });
        }
        Ok(RingMap {
            ring_id: ring.id(),
            body: MapBody::Table(Arc::new(images)),
        })
    }

    /// Tabulated map from a list of image Elements (must all belong to `ring`).
    pub fn from_elements(ring: &Ring, images: &[Element]) -> Result<RingMap> {
        let mut table = Vec::with_capacity(images.len());
        for x in images {
            if !ring.owns(x) {
                return Err(Error::RingMismatch);
            }
            table.push(x.index().ok_or(Error::RingMismatch)?);
        }
        RingMap::tabulated(ring, table)
    }

    /// Builtin structural map; only valid on the rational matrix ring.
    pub fn builtin(ring: &Ring, b: Builtin) -> Result<RingMap> {
        if !ring.is_structural() {
            return Err(Error::UnsupportedTabulated { op: "builtin map" });
        }
        Ok(RingMap {
            ring_id: ring.id(),
            body: MapBody::Builtin(b),
        })
    }

    /// The zero map on any ring.
    pub fn zero(ring: &Ring) -> RingMap {
        match ring.table() {
            Some(t) => RingMap {
                ring_id: ring.id(),
                body: MapBody::Table(Arc::new(vec![t.zero(); t.order()])),
            },
            None => RingMap {
                ring_id: ring.id(),
                body: MapBody::Builtin(Builtin::Zero),
            },
        }
    }

    /// The identity map on any ring.
    pub fn identity(ring: &Ring) -> RingMap {
        match ring.table() {
            Some(t) => RingMap {
                ring_id: ring.id(),
                body: MapBody::Table(Arc::new((0..t.order()).collect())),
            },
            None => RingMap {
                ring_id: ring.id(),
                body: MapBody::Builtin(Builtin::Identity),
            },
        }
    }

    /// Composition outer(inner(x)); both maps must live on the same ring.
    pub fn compose(outer: RingMap, inner: RingMap) -> Result<RingMap> {
        if outer.ring_id != inner.ring_id {
            return Err(Error::RingMismatch);
        }
        Ok(RingMap {
            ring_id: outer.ring_id,
            body: MapBody::Compose(Box::new(outer), Box::new(inner)),
        })
    }

    pub fn ring_id(&self) -> RingId {
        self.ring_id
    }

    /// The image table, if this map is tabulated.
    pub fn images(&self) -> Option<&[usize]> {
        match &self.body {
            MapBody::Table(t) => Some(t),
            _ => None,
        }
    }

    fn check_ring(&self, ring: &Ring) -> Result<()> {
        if ring.id() == self.ring_id {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    fn eval_index(&self, x: usize) -> usize {
        match &self.body {
            MapBody::Table(t) => t[x],
            MapBody::Builtin(_) => unreachable!("builtin on tabulated ring"),
            MapBody::Compose(outer, inner) => outer.eval_index(inner.eval_index(x)),
        }
    }

    fn eval_matrix(&self, x: &Mat2q) -> Mat2q {
        match &self.body {
            MapBody::Table(_) => unreachable!("table on structural ring"),
            MapBody::Builtin(b) => b.apply(x),
            MapBody::Compose(outer, inner) => outer.eval_matrix(&inner.eval_matrix(x)),
        }
    }

    /// Evaluates the map at `x`.
    pub fn eval(&self, ring: &Ring, x: &Element) -> Result<Element> {
        self.check_ring(ring)?;
        if !ring.owns(x) {
            return Err(Error::RingMismatch);
        }
        match (ring.table(), x.index(), x.matrix()) {
            (Some(_), Some(i), _) => ring.element(self.eval_index(i)),
            (None, _, Some(m)) => ring.matrix_element(self.eval_matrix(m)),
            _ => Err(Error::RingMismatch),
        }
    }

    /// Materializes any map on a tabulated ring into an image table.
    pub fn tabulate(&self, ring: &Ring) -> Result<RingMap> {
        self.check_ring(ring)?;
        let t = ring.require_table("tabulate")?;
        let images = (0..t.order()).map(|i| self.eval_index(i)).collect();
        RingMap::tabulated(ring, images)
    }

    /// Canonical literal form (`zero`, `flip`, `table:[..]`, `compose(..)`).
    pub fn describe(&self) -> String {
        match &self.body {
            MapBody::Table(t) => {
                let images: Vec<String> = t.iter().map(usize::to_string).collect();
                format!("table:[{}]", images.join(","))
            }
            MapBody::Builtin(b) => b.to_string(),
            MapBody::Compose(outer, inner) => {
                format!("compose({},{})", outer.describe(), inner.describe())
            }
        }
    }

    /// Classifies the map: additivity, multiplicativity, zero/unit
    /// preservation, and the endomorphism/automorphism verdicts.
    ///
    /// Tabulated rings are scanned exhaustively, so every verdict is
    /// decisive. On the structural ring the scan covers the integer grid
    /// plus `budget` seeded random pairs; bijectivity is asserted
    /// analytically for the builtin involutions (`flip`, `signconj`) and the
    /// identity, and reported as `unknown` for any other structural map,
    /// since sampling cannot prove bijectivity on an infinite carrier.
    pub fn classify(&self, ring: &Ring, budget: u32, seed: u64) -> Result<MapKindReport> {
        self.check_ring(ring)?;
        match ring.table() {
            Some(t) => Ok(self.classify_table(ring, t)),
            None => Ok(self.classify_structural(ring, budget, seed)),
        }
    }

    fn classify_table(&self, ring: &Ring, t: &TableRing) -> MapKindReport {
        let n = t.order();
        let el = |i: usize| ring.element(i).expect("index in range");
        let mut additive = true;
        let mut additive_witness = None;
        let mut multiplicative = true;
        let mut multiplicative_witness = None;
        let mut pairs = 0u64;
        for x in 0..n {
            for y in 0..n {
                pairs += 1;
                if additive && self.eval_index(t.add(x, y)) != t.add(self.eval_index(x), self.eval_index(y)) {
                    additive = false;
                    additive_witness = Some((el(x), el(y)));
                }
                if multiplicative
                    && self.eval_index(t.mul(x, y)) != t.mul(self.eval_index(x), self.eval_index(y))
                {
                    multiplicative = false;
                    multiplicative_witness = Some((el(x), el(y)));
                }
            }
        }
        let zero_preserving = self.eval_index(t.zero()) == t.zero();
        let unit_preserving = self.eval_index(t.one()) == t.one();
        let endomorphism = additive && multiplicative && unit_preserving;
        let mut seen = vec![false; n];
        for x in 0..n {
            seen[self.eval_index(x)] = true;
        }
        let bijective = seen.iter().all(|&s| s);
        MapKindReport {
            additive,
            additive_witness,
            zero_preserving,
            multiplicative,
            multiplicative_witness,
            unit_preserving,
            endomorphism,
            automorphism: Verdict::from_bool(endomorphism && bijective),
            pairs_checked: pairs,
        }
    }

    fn classify_structural(&self, ring: &Ring, budget: u32, seed: u64) -> MapKindReport {
        let el = |m: &Mat2q| ring.matrix_element(*m).expect("structural ring");
        let mut points = grid_matrices(crate::domain::DEFAULT_GRID_BOUND);
        points.extend(random_matrices(seed, 2 * budget as usize));
        let mut additive = true;
        let mut additive_witness = None;
        let mut multiplicative = true;
        let mut multiplicative_witness = None;
        let mut pairs = 0u64;
        let grid_len = points.len() - 2 * budget as usize;
        // Grid x grid pairs, then the random tail pairwise.
        let mut pair_list: Vec<(Mat2q, Mat2q)> = Vec::new();
        for i in 0..grid_len {
            for j in 0..grid_len {
                pair_list.push((points[i], points[j]));
            }
        }
        for pair in points[grid_len..].chunks_exact(2) {
            pair_list.push((pair[0], pair[1]));
        }
        for (x, y) in &pair_list {
            pairs += 1;
            if additive
                && self.eval_matrix(&x.add(y)) != self.eval_matrix(x).add(&self.eval_matrix(y))
            {
                additive = false;
                additive_witness = Some((el(x), el(y)));
            }
            if multiplicative
                && self.eval_matrix(&x.mul(y)) != self.eval_matrix(x).mul(&self.eval_matrix(y))
            {
                multiplicative = false;
                multiplicative_witness = Some((el(x), el(y)));
            }
        }
        let zero_preserving = self.eval_matrix(&Mat2q::zero()).is_zero();
        let unit_preserving = self.eval_matrix(&Mat2q::one()) == Mat2q::one();
        let endomorphism = additive && multiplicative && unit_preserving;
        let automorphism = if !endomorphism {
            Verdict::Fails
        } else {
            match &self.body {
                // flip and signconj are involutions, identity is its own
                // inverse: bijectivity holds analytically.
                MapBody::Builtin(Builtin::FlipConj)
                | MapBody::Builtin(Builtin::SignConj)
                | MapBody::Builtin(Builtin::Identity) => Verdict::Holds,
                _ => Verdict::Unknown,
            }
        };
        MapKindReport {
            additive,
            additive_witness,
            zero_preserving,
            multiplicative,
            multiplicative_witness,
            unit_preserving,
            endomorphism,
            automorphism,
            pairs_checked: pairs,
        }
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Backtracking enumerator for unital endomorphisms of a tabulated ring.
///
/// Images of 0 and 1 are pinned, then images of a greedily chosen generating
/// set are assigned depth-first; additivity and multiplicativity constraints
/// propagate through the additive/multiplicative closure after each
/// assignment, so contradictions surface early and non-generator images are
/// forced rather than searched.
struct EndoSearch<'a> {
    t: &'a TableRing,
    bijective_only: bool,
    img: Vec<Option<usize>>,
    assigned: Vec<usize>,
    preimages: Vec<u16>,
    trail: Vec<usize>,
    results: Vec<Vec<usize>>,
}

impl<'a> EndoSearch<'a> {
    fn generators(t: &TableRing) -> Vec<usize> {
        let n = t.order();
        let mut in_closure = vec![false; n];
        let mut members: Vec<usize> = Vec::new();
        let push = |z: usize, in_closure: &mut Vec<bool>, members: &mut Vec<usize>| {
            if !in_closure[z] {
                in_closure[z] = true;
                members.push(z);
            }
        };
        let close = |in_closure: &mut Vec<bool>, members: &mut Vec<usize>| {
            let mut head = 0;
            while head < members.len() {
                let a = members[head];
                head += 1;
                for idx in 0..members.len() {
                    let b = members[idx];
                    for v in [t.add(a, b), t.mul(a, b), t.mul(b, a), t.neg(a)] {
                        if !in_closure[v] {
                            in_closure[v] = true;
                            members.push(v);
                        }
                    }
                }
            }
        };
        push(t.zero(), &mut in_closure, &mut members);
        push(t.one(), &mut in_closure, &mut members);
        close(&mut in_closure, &mut members);
        let mut gens = Vec::new();
        while members.len() < n {
            let g = (0..n).find(|&z| !in_closure[z]).unwrap();
            gens.push(g);
            push(g, &mut in_closure, &mut members);
            close(&mut in_closure, &mut members);
        }
        gens
    }

    fn assign(&mut self, z: usize, v: usize) -> bool {
        match self.img[z] {
            Some(old) => old == v,
            None => {
                if self.bijective_only && self.preimages[v] > 0 {
                    return false;
                }
                self.img[z] = Some(v);
                self.preimages[v] += 1;
                self.assigned.push(z);
                self.trail.push(z);
                true
            }
        }
    }

    /// Propagates phi(a#b) = phi(a)#phi(b) through all pairs involving
    /// newly assigned elements. Returns false on contradiction.
    fn propagate(&mut self, mut head: usize) -> bool {
        while head < self.assigned.len() {
            let a = self.assigned[head];
            head += 1;
            let fa = self.img[a].unwrap();
            let mut idx = 0;
            while idx < self.assigned.len() {
                let b = self.assigned[idx];
                idx += 1;
                let fb = self.img[b].unwrap();
                let constraints = [
                    (self.t.add(a, b), self.t.add(fa, fb)),
                    (self.t.mul(a, b), self.t.mul(fa, fb)),
                    (self.t.mul(b, a), self.t.mul(fb, fa)),
                ];
                for (src, tgt) in constraints {
                    if !self.assign(src, tgt) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let z = self.trail.pop().unwrap();
            let v = self.img[z].take().unwrap();
            self.preimages[v] -= 1;
            self.assigned.pop();
        }
    }

    fn dfs(&mut self, gens: &[usize]) {
        match gens.split_first() {
            None => {
                debug_assert!(self.img.iter().all(Option::is_some));
                let images: Vec<usize> = self.img.iter().map(|v| v.unwrap()).collect();
                if self.bijective_only {
                    let mut seen = vec![false; images.len()];
                    images.iter().for_each(|&v| seen[v] = true);
                    if !seen.iter().all(|&s| s) {
                        return;
                    }
                }
                self.results.push(images);
            }
            Some((&g, rest)) => {
                if self.img[g].is_some() {
                    // Forced by an earlier closure; no branching here.
                    self.dfs(rest);
                    return;
                }
                for v in 0..self.t.order() {
                    let mark = self.trail.len();
                    let head = self.assigned.len();
                    if self.assign(g, v) && self.propagate(head) {
                        self.dfs(rest);
                    }
                    self.undo_to(mark);
                }
            }
        }
    }

    fn run(t: &TableRing, bijective_only: bool) -> Vec<Vec<usize>> {
        let mut search = EndoSearch {
            t,
            bijective_only,
            img: vec![None; t.order()],
            assigned: Vec::new(),
            preimages: vec![0; t.order()],
            trail: Vec::new(),
            results: Vec::new(),
        };
        let ok = search.assign(t.zero(), t.zero())
            && search.assign(t.one(), t.one())
            && search.propagate(0);
        if ok {
            let gens = Self::generators(t);
            search.dfs(&gens);
        }
        search.results.sort();
        search.results
    }
}

/// All automorphisms (bijective unital endomorphisms) of a tabulated ring of
/// order at most 64, in deterministic image-table order.
pub fn enumerate_automorphisms(ring: &Ring) -> Result<Vec<RingMap>> {
    let t = ring.require_table("enumerate_automorphisms")?;
    if t.order() > 64 {
        return Err(Error::OrderBound {
            order: t.order(),
            bound: 64,
            what: "enumerate_automorphisms",
        });
    }
    EndoSearch::run(t, true)
        .into_iter()
        .map(|images| RingMap::tabulated(ring, images))
        .collect()
}

/// All unital endomorphisms of a tabulated ring of order at most 16
/// (the automorphism enumerator with the permutation constraint dropped).
pub fn enumerate_unital_endomorphisms(ring: &Ring) -> Result<Vec<RingMap>> {
    let t = ring.require_table("enumerate_unital_endomorphisms")?;
    if t.order() > 16 {
        return Err(Error::OrderBound {
            order: t.order(),
            bound: 16,
            what: "enumerate_unital_endomorphisms",
        });
    }
    EndoSearch::run(t, false)
        .into_iter()
        .map(|images| RingMap::tabulated(ring, images))
        .collect()
}

/// Parses a map literal in the CLI grammar:
/// `zero | identity | flip | scaledflip:k | signconj | table:[i0,i1,...] |
/// compose(outer,inner)`.
pub fn parse_map(ring: &Ring, s: &str) -> Result<RingMap> {
    let s = s.trim();
    let parse_err = |expected: &str| Error::Parse {
        position: 0,
        expected: expected.into(),
        found: s.chars().take(24).collect(),
    };
    if let Some(body) = s.strip_prefix("compose(").and_then(|t| t.strip_suffix(')')) {
        // Split at the top-level comma.
        let mut depth = 0usize;
        let mut split = None;
        for (i, c) in body.char_indices() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth = depth.saturating_sub(1),
                ',' if depth == 0 => {
                    split = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let split = split.ok_or_else(|| parse_err("compose(outer,inner)"))?;
        let outer = parse_map(ring, &body[..split])?;
        let inner = parse_map(ring, &body[split + 1..])?;
        return RingMap::compose(outer, inner);
    }
    if let Some(list) = s.strip_prefix("table:[").and_then(|t| t.strip_suffix(']')) {
        let images = list
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| parse_err("comma-separated indices"))
            })
            .collect::<Result<Vec<_>>>()?;
        return RingMap::tabulated(ring, images);
    }
    if let Some(k) = s.strip_prefix("scaledflip:") {
        return RingMap::builtin(ring, Builtin::ScaledFlip(rat_from_str(k)?));
    }
    match s {
        "zero" => Ok(RingMap::zero(ring)),
        "identity" => Ok(RingMap::identity(ring)),
        "flip" => RingMap::builtin(ring, Builtin::FlipConj),
        "signconj" => RingMap::builtin(ring, Builtin::SignConj),
        _ => Err(parse_err(
            "zero, identity, flip, scaledflip:k, signconj, table:[..], compose(..)",
        )),
    }
}
