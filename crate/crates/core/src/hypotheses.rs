//! Checkers for the hypothesis sets under which the additivity theorems are
//! proved: the annihilator-style conditions on the associated map g, the
//! stronger sum-vanishing conditions, their variants with d on the left
//! factor, the three-of-four corollary conditions, and the prime-ring
//! premise.
//!
//! All quantifiers are realized with for-all readings: the hypothesis of an
//! implication quantifies x over a cell, the conclusion constrains (a, b).
//! Every clause is decided by exhaustive scans over the precomputed Peirce
//! cells, so these checkers require a tabulated ring.

use crate::error::Result;
use crate::maps::RingMap;
use crate::peirce::PeirceFrame;
use crate::report::{AssumptionReport, Clause, ClauseWitness};
use crate::ring::{Element, Ring};

struct Scan<'a> {
    frame: &'a PeirceFrame,
    g: Vec<usize>,
}

impl<'a> Scan<'a> {
    fn new(frame: &'a PeirceFrame, g: &RingMap) -> Result<Scan<'a>> {
        let tabulated = g.tabulate(frame.ring())?;
        Ok(Scan {
            frame,
            g: tabulated.images().unwrap().to_vec(),
        })
    }

    fn el(&self, i: usize) -> Element {
        self.frame.ring().element(i).expect("index in range")
    }

    fn zero_clause(&self, name: &str) -> Clause {
        let t = self.frame.ring().table().unwrap();
        let holds = self.g[t.zero()] == t.zero();
        Clause {
            id: name.to_string(),
            holds,
            witness: (!holds).then(|| ClauseWitness {
                i: None,
                j: None,
                k: None,
                a: None,
                b: None,
                x_range: Some("g(0)".into()),
                lhs: Some(self.el(self.g[t.zero()])),
                rhs: Some(self.el(t.zero())),
            }),
        }
    }

    /// Right-annihilation clause: if `(a + b) * g(x) = 0` for all x in
    /// R_(xi,xj), the conclusion must hold for (a, b).
    fn right_annihilation(
        &self,
        cell_a: (u8, u8),
        cell_b: (u8, u8),
        x_cell: (u8, u8),
        conclusion: impl Fn(usize, usize, usize) -> bool,
        indices: (Option<u8>, Option<u8>, Option<u8>),
    ) -> Result<Option<ClauseWitness>> {
        let t = self.frame.ring().table().unwrap();
        let xs = self.frame.cell(x_cell.0, x_cell.1)?;
        for &a in self.frame.cell(cell_a.0, cell_a.1)? {
            for &b in self.frame.cell(cell_b.0, cell_b.1)? {
                let sum = t.add(a, b);
                let hypothesis = xs.iter().all(|&x| t.mul(sum, self.g[x]) == t.zero());
                if hypothesis && !conclusion(a, b, sum) {
                    return Ok(Some(ClauseWitness {
                        i: indices.0,
                        j: indices.1,
                        k: indices.2,
                        a: Some(self.el(a)),
                        b: Some(self.el(b)),
                        x_range: Some(format!("all x in R{}{}", x_cell.0, x_cell.1)),
                        lhs: None,
                        rhs: None,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Left-annihilation clause: if `g(x) * (a + b) = 0` for all x in
    /// R_(xi,xj), the conclusion must hold for (a, b).
    fn left_annihilation(
        &self,
        cell_a: (u8, u8),
        cell_b: (u8, u8),
        x_cell: (u8, u8),
        conclusion: impl Fn(usize, usize, usize) -> bool,
        indices: (Option<u8>, Option<u8>, Option<u8>),
    ) -> Result<Option<ClauseWitness>> {
        let t = self.frame.ring().table().unwrap();
        let xs = self.frame.cell(x_cell.0, x_cell.1)?;
        for &a in self.frame.cell(cell_a.0, cell_a.1)? {
            for &b in self.frame.cell(cell_b.0, cell_b.1)? {
                let sum = t.add(a, b);
                let hypothesis = xs.iter().all(|&x| t.mul(self.g[x], sum) == t.zero());
                if hypothesis && !conclusion(a, b, sum) {
                    return Ok(Some(ClauseWitness {
                        i: indices.0,
                        j: indices.1,
                        k: indices.2,
                        a: Some(self.el(a)),
                        b: Some(self.el(b)),
                        x_range: Some(format!("all x in R{}{}", x_cell.0, x_cell.1)),
                        lhs: None,
                        rhs: None,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Additivity of g across a cell pair: g(a + b) = g(a) + g(b).
    fn cross_cell_additivity(
        &self,
        cell_a: (u8, u8),
        cell_b: (u8, u8),
    ) -> Result<Option<ClauseWitness>> {
        let t = self.frame.ring().table().unwrap();
        for &a in self.frame.cell(cell_a.0, cell_a.1)? {
            for &b in self.frame.cell(cell_b.0, cell_b.1)? {
                let lhs = self.g[t.add(a, b)];
                let rhs = t.add(self.g[a], self.g[b]);
                if lhs != rhs {
                    return Ok(Some(ClauseWitness {
                        i: None,
                        j: None,
                        k: None,
                        a: Some(self.el(a)),
                        b: Some(self.el(b)),
                        x_range: None,
                        lhs: Some(self.el(lhs)),
                        rhs: Some(self.el(rhs)),
                    }));
                }
            }
        }
        Ok(None)
    }
}

fn clause(id: impl Into<String>, witness: Option<ClauseWitness>) -> Clause {
    Clause {
        id: id.into(),
        holds: witness.is_none(),
        witness,
    }
}

/// The base assumption on g (clauses named `0` through `iv`):
///
/// * `0` — g(0) = 0;
/// * `i` — for k and (i, j) with i <= j: if `(a_k1 + b_k2) g(x_ij) = 0` for
///   all x in R_ij then a_k1 = 0 (i = 1) or b_k2 = 0 (i = 2);
/// * `ii` — if `g(x_ii)(a_1j + b_2j) = 0` for all x in R_ii then a_1j = 0
///   (i = 1) or b_2j = 0 (i = 2);
/// * `iii`/`iv` — g is additive across R11 + R12 and R11 + R21.
pub fn check_assumption_1_1(g: &RingMap, frame: &PeirceFrame) -> Result<AssumptionReport> {
    let scan = Scan::new(frame, g)?;
    let t = frame.ring().table().unwrap();
    let mut clauses = vec![scan.zero_clause("0")];

    let mut witness_i = None;
    'outer_i: for k in [1u8, 2] {
        for (i, j) in [(1u8, 1u8), (1, 2), (2, 2)] {
            let w = scan.right_annihilation(
                (k, 1),
                (k, 2),
                (i, j),
                |a, b, _| if i == 1 { a == t.zero() } else { b == t.zero() },
                (Some(i), Some(j), Some(k)),
            )?;
            if w.is_some() {
                witness_i = w;
                break 'outer_i;
            }
        }
    }
    clauses.push(clause("i", witness_i));

    let mut witness_ii = None;
    'outer_ii: for i in [1u8, 2] {
        for j in [1u8, 2] {
            let w = scan.left_annihilation(
                (1, j),
                (2, j),
                (i, i),
                |a, b, _| if i == 1 { a == t.zero() } else { b == t.zero() },
                (Some(i), Some(j), None),
            )?;
            if w.is_some() {
                witness_ii = w;
                break 'outer_ii;
            }
        }
    }
    clauses.push(clause("ii", witness_ii));

    clauses.push(clause("iii", scan.cross_cell_additivity((1, 1), (1, 2))?));
    clauses.push(clause("iv", scan.cross_cell_additivity((1, 1), (2, 1))?));

    Ok(AssumptionReport::conjunction("assumption_1_1", clauses))
}

/// The stronger sum-vanishing conditions (clauses `0`, `i`, `ii`):
///
/// * `i` — for each i, j: if `(a_j1 + b_j2) g(x_ii) = 0` for all x in R_ii
///   then a_j1 + b_j2 = 0;
/// * `ii` — for each i: if `g(x_ii)(a_11 + a_21) = 0` for all x in R_ii then
///   a_11 + a_21 = 0.
pub fn check_thm2_11_conditions(g: &RingMap, frame: &PeirceFrame) -> Result<AssumptionReport> {
    let scan = Scan::new(frame, g)?;
    let t = frame.ring().table().unwrap();
    let mut clauses = vec![scan.zero_clause("0")];

    let mut witness_i = None;
    'outer_i: for j in [1u8, 2] {
        for i in [1u8, 2] {
            let w = scan.right_annihilation(
                (j, 1),
                (j, 2),
                (i, i),
                |_, _, sum| sum == t.zero(),
                (Some(i), Some(j), None),
            )?;
            if w.is_some() {
                witness_i = w;
                break 'outer_i;
            }
        }
    }
    clauses.push(clause("i", witness_i));

    let mut witness_ii = None;
    for i in [1u8, 2] {
        let w = scan.left_annihilation(
            (1, 1),
            (2, 1),
            (i, i),
            |_, _, sum| sum == t.zero(),
            (Some(i), None, None),
        )?;
        if w.is_some() {
            witness_ii = w;
            break;
        }
    }
    clauses.push(clause("ii", witness_ii));

    Ok(AssumptionReport::conjunction(
        "thm2_11_conditions",
        clauses,
    ))
}

/// Conditions with d taking over the left factor (clauses `0`, `i`, `ii`,
/// `iii`): `i` and `ii` as in the base assumption, and `iii` — if
/// `d(x_ii)(a_1j + b_2j) = 0` for all x in R_ii then a_1j = 0 (i = 1) or
/// b_2j = 0 (i = 2).
pub fn check_cor2_1_conditions(
    d: &RingMap,
    g: &RingMap,
    frame: &PeirceFrame,
) -> Result<AssumptionReport> {
    let base = check_assumption_1_1(g, frame)?;
    let mut clauses: Vec<Clause> = base
        .clauses
        .into_iter()
        .filter(|c| c.id == "0" || c.id == "i" || c.id == "ii")
        .collect();

    let d_scan = Scan::new(frame, d)?;
    let t = frame.ring().table().unwrap();
    let mut witness_iii = None;
    'outer: for i in [1u8, 2] {
        for j in [1u8, 2] {
            let w = d_scan.left_annihilation(
                (1, j),
                (2, j),
                (i, i),
                |a, b, _| if i == 1 { a == t.zero() } else { b == t.zero() },
                (Some(i), Some(j), None),
            )?;
            if w.is_some() {
                witness_iii = w;
                break 'outer;
            }
        }
    }
    clauses.push(clause("iii", witness_iii));

    Ok(AssumptionReport::conjunction("cor2_1_conditions", clauses))
}

/// The four conditions of the three-of-four corollary, each evaluated
/// independently for every i. `satisfied_count` counts the numbered
/// conditions that hold; `overall` is true when g vanishes at zero and at
/// least three of the four hold (which three is not fixed).
pub fn check_four_condition_corollary(
    g: &RingMap,
    frame: &PeirceFrame,
) -> Result<AssumptionReport> {
    let scan = Scan::new(frame, g)?;
    let t = frame.ring().table().unwrap();
    let zero_clause = scan.zero_clause("0");

    let conclusion = |_: usize, _: usize, sum: usize| sum == t.zero();
    let mut numbered = Vec::new();
    for (id, right_side, cell_a, cell_b) in [
        ("i", true, (1u8, 1u8), (1u8, 2u8)),
        ("ii", true, (2, 1), (2, 2)),
        ("iii", false, (1, 1), (2, 1)),
        ("iv", false, (1, 2), (2, 2)),
    ] {
        let mut witness = None;
        for i in [1u8, 2] {
            let w = if right_side {
                scan.right_annihilation(cell_a, cell_b, (i, i), conclusion, (Some(i), None, None))?
            } else {
                scan.left_annihilation(cell_a, cell_b, (i, i), conclusion, (Some(i), None, None))?
            };
            if w.is_some() {
                witness = w;
                break;
            }
        }
        numbered.push(clause(id, witness));
    }

    let satisfied = numbered.iter().filter(|c| c.holds).count();
    let overall = zero_clause.holds && satisfied >= 3;
    let mut clauses = vec![zero_clause];
    clauses.extend(numbered);
    Ok(AssumptionReport {
        family: "four_condition_corollary".into(),
        clauses,
        overall,
        satisfied_count: satisfied,
    })
}

/// Premise of the prime-ring corollary: the ring is prime with 1 != 0, `e`
/// is a non-trivial idempotent, and g is a (unital) endomorphism fixing e.
pub fn check_prime_corollary_premise(
    ring: &Ring,
    e: &Element,
    g: &RingMap,
) -> Result<AssumptionReport> {
    let t = ring.require_table("check_prime_corollary_premise")?;
    let mut clauses = Vec::new();

    clauses.push(Clause {
        id: "prime".into(),
        holds: ring.is_prime()?,
        witness: None,
    });
    clauses.push(Clause {
        id: "unital_nonzero".into(),
        holds: t.one() != t.zero(),
        witness: None,
    });

    let e_idx = e.index().ok_or(crate::error::Error::RingMismatch)?;
    let idempotent = t.mul(e_idx, e_idx) == e_idx;
    let nontrivial = e_idx != t.zero() && e_idx != t.one();
    clauses.push(Clause {
        id: "e_nontrivial_idempotent".into(),
        holds: idempotent && nontrivial,
        witness: (!(idempotent && nontrivial)).then(|| ClauseWitness {
            i: None,
            j: None,
            k: None,
            a: Some(e.clone()),
            b: None,
            x_range: Some("e*e and triviality".into()),
            lhs: Some(ring.element(t.mul(e_idx, e_idx)).unwrap()),
            rhs: Some(e.clone()),
        }),
    });

    let kind = g.classify(ring, 0, 0)?;
    let endo = kind.endomorphism;
    let endo_witness = if endo {
        None
    } else {
        let (a, b) = kind
            .additive_witness
            .or(kind.multiplicative_witness)
            .map(|(a, b)| (Some(a), Some(b)))
            .unwrap_or((None, None));
        Some(ClauseWitness {
            i: None,
            j: None,
            k: None,
            a,
            b,
            x_range: Some(
                if kind.unit_preserving {
                    "additivity/multiplicativity".into()
                } else {
                    "g(1) != 1".into()
                },
            ),
            lhs: None,
            rhs: None,
        })
    };
    clauses.push(Clause {
        id: "g_endomorphism".into(),
        holds: endo,
        witness: endo_witness,
    });

    let ge = g.eval(ring, e)?;
    clauses.push(Clause {
        id: "g_fixes_e".into(),
        holds: ge == *e,
        witness: (ge != *e).then(|| ClauseWitness {
            i: None,
            j: None,
            k: None,
            a: Some(e.clone()),
            b: None,
            x_range: None,
            lhs: Some(ge.clone()),
            rhs: Some(e.clone()),
        }),
    });

    Ok(AssumptionReport::conjunction(
        "prime_corollary_premise",
        clauses,
    ))
}
