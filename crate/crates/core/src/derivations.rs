//! Executable predicates for the derivation-like identities.
//!
//! Every check evaluates residuals of the defining identities over a
//! quantifier domain and reports first-failure witnesses. Preconditions
//! (the associated map vanishing at zero, alpha being an automorphism) are
//! reported as distinct verdicts rather than silently assumed.

use crate::domain::{grid_matrices, random_matrices, IdentityDomain};
use crate::error::{Error, Result};
use crate::maps::RingMap;
use crate::peirce::PeirceFrame;
use crate::report::{DefectReport, IdentityWitness, Verdict};
use crate::ring::{Element, Ring};

/// The quantifier points realizing "for all x in R" for a domain.
pub(crate) fn quantifier_points(ring: &Ring, dom: &IdentityDomain) -> Result<Vec<Element>> {
    dom.validate_for(ring)?;
    match dom {
        IdentityDomain::Exhaustive => ring.elements(),
        IdentityDomain::GridRandom {
            grid_bound,
            random_budget,
            seed,
        } => {
            let mut points = grid_matrices(*grid_bound);
            points.extend(random_matrices(*seed, *random_budget as usize));
            points
                .into_iter()
                .map(|m| ring.matrix_element(m))
                .collect()
        }
    }
}

fn check_map_ring(ring: &Ring, maps: &[&RingMap]) -> Result<()> {
    if maps.iter().any(|m| m.ring_id() != ring.id()) {
        Err(Error::RingMismatch)
    } else {
        Ok(())
    }
}

fn zero_preservation(ring: &Ring, name: &str, map: &RingMap, report: &mut DefectReport) -> Result<()> {
    let at_zero = map.eval(ring, &ring.zero())?;
    let verdict = Verdict::from_bool(ring.is_zero(&at_zero));
    let detail = (!verdict.holds()).then(|| format!("{name}(0) = {at_zero}"));
    report.precondition(format!("{name}_vanishes_at_zero"), verdict, detail);
    Ok(())
}

fn automorphism_precondition(
    ring: &Ring,
    name: &str,
    map: &RingMap,
    report: &mut DefectReport,
) -> Result<()> {
    let kind = map.classify(ring, 16, 0)?;
    let detail = match kind.automorphism {
        Verdict::Holds => None,
        Verdict::Fails => Some("not a bijective unital endomorphism".to_string()),
        Verdict::Unknown => {
            Some("bijectivity undecidable by sampling on the structural ring".to_string())
        }
    };
    report.precondition(format!("{name}_automorphism"), kind.automorphism, detail);
    Ok(())
}

/// A two-sided identity instance: `lhs = rhs` at one point.
struct Instance<'a> {
    identity: &'a str,
    lhs: Element,
    rhs: Element,
}

fn record(ring: &Ring, report: &mut DefectReport, x: &Element, y: Option<&Element>, inst: Instance) {
    if ring.eq(&inst.lhs, &inst.rhs).unwrap_or(false) {
        return;
    }
    report.witness(IdentityWitness {
        identity: inst.identity.to_string(),
        x: x.clone(),
        y: y.cloned(),
        z: None,
        lhs: inst.lhs,
        rhs: inst.rhs,
    });
}

/// Residuals of the skew semi-derivation identities at one point `(x, y)`:
///
/// * `r1 = d(xy) - d(x)g(y) - alpha(x)d(y)`
/// * `r2 = d(xy) - d(x)alpha(y) - g(x)d(y)`
/// * `r3 = d(g(x)) - g(d(x))`
///
/// Each is zero exactly when the corresponding clause holds there.
pub fn ssd_defect(
    ring: &Ring,
    d: &RingMap,
    g: &RingMap,
    alpha: &RingMap,
    x: &Element,
    y: &Element,
) -> Result<(Element, Element, Element)> {
    check_map_ring(ring, &[d, g, alpha])?;
    let xy = ring.mul(x, y)?;
    let d_xy = d.eval(ring, &xy)?;
    let rhs1 = ring.add(
        &ring.mul(&d.eval(ring, x)?, &g.eval(ring, y)?)?,
        &ring.mul(&alpha.eval(ring, x)?, &d.eval(ring, y)?)?,
    )?;
    let rhs2 = ring.add(
        &ring.mul(&d.eval(ring, x)?, &alpha.eval(ring, y)?)?,
        &ring.mul(&g.eval(ring, x)?, &d.eval(ring, y)?)?,
    )?;
    let r1 = ring.sub(&d_xy, &rhs1)?;
    let r2 = ring.sub(&d_xy, &rhs2)?;
    let r3 = ring.sub(
        &d.eval(ring, &g.eval(ring, x)?)?,
        &g.eval(ring, &d.eval(ring, x)?)?,
    )?;
    Ok((r1, r2, r3))
}

/// Multiplicative skew semi-derivation check: all three residuals of
/// [`ssd_defect`] vanish over the domain.
pub fn check_mult_skew_semi_derivation(
    ring: &Ring,
    d: &RingMap,
    g: &RingMap,
    alpha: &RingMap,
    dom: &IdentityDomain,
) -> Result<DefectReport> {
    check_map_ring(ring, &[d, g, alpha])?;
    let mut report = DefectReport::new("mult_skew_semi_derivation");
    zero_preservation(ring, "g", g, &mut report)?;
    automorphism_precondition(ring, "alpha", alpha, &mut report)?;
    let points = quantifier_points(ring, dom)?;
    for x in &points {
        for y in &points {
            report.pairs_checked += 1;
            let xy = ring.mul(x, y)?;
            let d_xy = d.eval(ring, &xy)?;
            let rhs1 = ring.add(
                &ring.mul(&d.eval(ring, x)?, &g.eval(ring, y)?)?,
                &ring.mul(&alpha.eval(ring, x)?, &d.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "ssd_r1",
                lhs: d_xy.clone(),
                rhs: rhs1,
            });
            let rhs2 = ring.add(
                &ring.mul(&d.eval(ring, x)?, &alpha.eval(ring, y)?)?,
                &ring.mul(&g.eval(ring, x)?, &d.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "ssd_r2",
                lhs: d_xy,
                rhs: rhs2,
            });
        }
        record(ring, &mut report, x, None, Instance {
            identity: "ssd_commute",
            lhs: d.eval(ring, &g.eval(ring, x)?)?,
            rhs: g.eval(ring, &d.eval(ring, x)?)?,
        });
    }
    Ok(report)
}

/// Multiplicative generalized skew semi-derivation check. The inner map `d`
/// must itself pass [`check_mult_skew_semi_derivation`] on the same domain;
/// a failure there is reported as a distinct precondition verdict citing the
/// failing clause.
pub fn check_mult_generalized_ssd(
    ring: &Ring,
    f: &RingMap,
    d: &RingMap,
    g: &RingMap,
    alpha: &RingMap,
    dom: &IdentityDomain,
) -> Result<DefectReport> {
    check_map_ring(ring, &[f, d, g, alpha])?;
    let mut report = DefectReport::new("mult_generalized_skew_semi_derivation");
    let inner = check_mult_skew_semi_derivation(ring, d, g, alpha, dom)?;
    let detail = if inner.holds {
        None
    } else if let Some(w) = inner.witnesses.first() {
        Some(format!("inner d fails clause {}", w.identity))
    } else {
        inner
            .preconditions
            .iter()
            .find(|p| p.verdict == Verdict::Fails)
            .map(|p| format!("inner d precondition {} fails", p.name))
    };
    report.precondition(
        "d_skew_semi_derivation",
        Verdict::from_bool(inner.holds),
        detail,
    );
    zero_preservation(ring, "g", g, &mut report)?;
    automorphism_precondition(ring, "alpha", alpha, &mut report)?;
    let points = quantifier_points(ring, dom)?;
    for x in &points {
        for y in &points {
            report.pairs_checked += 1;
            let xy = ring.mul(x, y)?;
            let f_xy = f.eval(ring, &xy)?;
            let rhs1 = ring.add(
                &ring.mul(&f.eval(ring, x)?, &g.eval(ring, y)?)?,
                &ring.mul(&alpha.eval(ring, x)?, &d.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "gssd_s1",
                lhs: f_xy.clone(),
                rhs: rhs1,
            });
            let rhs2 = ring.add(
                &ring.mul(&d.eval(ring, x)?, &alpha.eval(ring, y)?)?,
                &ring.mul(&g.eval(ring, x)?, &f.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "gssd_s2",
                lhs: f_xy,
                rhs: rhs2,
            });
        }
        record(ring, &mut report, x, None, Instance {
            identity: "gssd_commute",
            lhs: f.eval(ring, &g.eval(ring, x)?)?,
            rhs: g.eval(ring, &f.eval(ring, x)?)?,
        });
    }
    Ok(report)
}

/// Multiplicative semi-derivation check:
/// `D(xy) = D(x)g(y) + xD(y) = D(x)y + g(x)D(y)` and `D(g(x)) = g(D(x))`.
pub fn check_mult_semi_derivation(
    ring: &Ring,
    big_d: &RingMap,
    g: &RingMap,
    dom: &IdentityDomain,
) -> Result<DefectReport> {
    check_map_ring(ring, &[big_d, g])?;
    let mut report = DefectReport::new("mult_semi_derivation");
    let points = quantifier_points(ring, dom)?;
    for x in &points {
        for y in &points {
            report.pairs_checked += 1;
            let xy = ring.mul(x, y)?;
            let d_xy = big_d.eval(ring, &xy)?;
            let rhs1 = ring.add(
                &ring.mul(&big_d.eval(ring, x)?, &g.eval(ring, y)?)?,
                &ring.mul(x, &big_d.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "semi_r1",
                lhs: d_xy.clone(),
                rhs: rhs1,
            });
            let rhs2 = ring.add(
                &ring.mul(&big_d.eval(ring, x)?, y)?,
                &ring.mul(&g.eval(ring, x)?, &big_d.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "semi_r2",
                lhs: d_xy,
                rhs: rhs2,
            });
        }
        record(ring, &mut report, x, None, Instance {
            identity: "semi_commute",
            lhs: big_d.eval(ring, &g.eval(ring, x)?)?,
            rhs: g.eval(ring, &big_d.eval(ring, x)?)?,
        });
    }
    Ok(report)
}

/// Multiplicative skew derivation check:
/// `delta(xy) = delta(x)y + alpha(x)delta(y)` with alpha an automorphism.
pub fn check_mult_skew_derivation(
    ring: &Ring,
    delta: &RingMap,
    alpha: &RingMap,
    dom: &IdentityDomain,
) -> Result<DefectReport> {
    check_map_ring(ring, &[delta, alpha])?;
    let mut report = DefectReport::new("mult_skew_derivation");
    automorphism_precondition(ring, "alpha", alpha, &mut report)?;
    let points = quantifier_points(ring, dom)?;
    for x in &points {
        for y in &points {
            report.pairs_checked += 1;
            let rhs = ring.add(
                &ring.mul(&delta.eval(ring, x)?, y)?,
                &ring.mul(&alpha.eval(ring, x)?, &delta.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "skew_derivation",
                lhs: delta.eval(ring, &ring.mul(x, y)?)?,
                rhs,
            });
        }
    }
    Ok(report)
}

/// Multiplicative derivation check: `h(xy) = h(x)y + xh(y)`.
pub fn check_mult_derivation(
    ring: &Ring,
    h: &RingMap,
    dom: &IdentityDomain,
) -> Result<DefectReport> {
    check_map_ring(ring, &[h])?;
    let mut report = DefectReport::new("mult_derivation");
    let points = quantifier_points(ring, dom)?;
    for x in &points {
        for y in &points {
            report.pairs_checked += 1;
            let rhs = ring.add(
                &ring.mul(&h.eval(ring, x)?, y)?,
                &ring.mul(x, &h.eval(ring, y)?)?,
            )?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "derivation",
                lhs: h.eval(ring, &ring.mul(x, y)?)?,
                rhs,
            });
        }
    }
    Ok(report)
}

/// Cell-pair additivity patterns from the lemma statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellPattern {
    /// `m(a + b) = m(a) + m(b)` for `a` in R_first, `b` in R_second.
    Pair { first: (u8, u8), second: (u8, u8) },
    /// `m(a12 + b12*c22) = m(a12) + m(b12*c22)` over triples.
    Product12,
    /// `m(a21 + b22*c21) = m(a21) + m(b22*c21)` over triples.
    Product21,
    /// `m(a11 + a12 + a21 + a22) = sum of the four images`.
    FullSum,
}

/// The lemma-shaped patterns recorded for every map found by the search:
/// the five cross-cell pairs, the two product forms, the four same-cell
/// pairs, and the full four-cell sum.
pub const LEMMA_PATTERNS: [CellPattern; 12] = [
    CellPattern::Pair { first: (1, 1), second: (1, 2) },
    CellPattern::Pair { first: (1, 1), second: (2, 1) },
    CellPattern::Pair { first: (2, 2), second: (1, 2) },
    CellPattern::Pair { first: (2, 2), second: (2, 1) },
    CellPattern::Pair { first: (1, 1), second: (2, 2) },
    CellPattern::Product12,
    CellPattern::Product21,
    CellPattern::Pair { first: (1, 2), second: (1, 2) },
    CellPattern::Pair { first: (2, 1), second: (2, 1) },
    CellPattern::Pair { first: (1, 1), second: (1, 1) },
    CellPattern::Pair { first: (2, 2), second: (2, 2) },
    CellPattern::FullSum,
];

impl std::fmt::Display for CellPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CellPattern::Pair { first, second } => {
                write!(f, "pair:{}{}+{}{}", first.0, first.1, second.0, second.1)
            }
            CellPattern::Product12 => f.write_str("prod:12"),
            CellPattern::Product21 => f.write_str("prod:21"),
            CellPattern::FullSum => f.write_str("full"),
        }
    }
}

impl std::str::FromStr for CellPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cell = |c: &str| -> Result<(u8, u8)> {
            let mut chars = c.chars();
            let parse = |c: Option<char>| match c {
                Some('1') => Ok(1u8),
                Some('2') => Ok(2u8),
                _ => Err(Error::UnknownPattern(s.to_string())),
            };
            let (i, j) = (parse(chars.next())?, parse(chars.next())?);
            if chars.next().is_some() {
                return Err(Error::UnknownPattern(s.to_string()));
            }
            Ok((i, j))
        };
        match s {
            "full" => Ok(CellPattern::FullSum),
            "prod:12" => Ok(CellPattern::Product12),
            "prod:21" => Ok(CellPattern::Product21),
            _ => {
                let body = s
                    .strip_prefix("pair:")
                    .ok_or_else(|| Error::UnknownPattern(s.to_string()))?;
                let (a, b) = body
                    .split_once('+')
                    .ok_or_else(|| Error::UnknownPattern(s.to_string()))?;
                Ok(CellPattern::Pair {
                    first: cell(a)?,
                    second: cell(b)?,
                })
            }
        }
    }
}

/// Exhaustively checks one lemma-shaped partial-additivity equation for `m`
/// over the named cells of a tabulated frame.
pub fn check_partial_additivity(
    m: &RingMap,
    frame: &PeirceFrame,
    pattern: CellPattern,
) -> Result<DefectReport> {
    let ring = frame.ring();
    check_map_ring(ring, &[m])?;
    frame.ring().require_table("check_partial_additivity")?;
    let mut report = DefectReport::new(format!("partial_additivity({pattern})"));
    let el = |i: usize| ring.element(i).expect("cell member in range");
    let ev = |i: usize| -> Result<Element> { m.eval(ring, &el(i)) };
    let t = ring.table().unwrap();
    match pattern {
        CellPattern::Pair { first, second } => {
            for &a in frame.cell(first.0, first.1)? {
                for &b in frame.cell(second.0, second.1)? {
                    report.pairs_checked += 1;
                    let lhs = ev(t.add(a, b))?;
                    let rhs = ring.add(&ev(a)?, &ev(b)?)?;
                    record(ring, &mut report, &el(a), Some(&el(b)), Instance {
                        identity: "partial_additivity",
                        lhs,
                        rhs,
                    });
                }
            }
        }
        CellPattern::Product12 | CellPattern::Product21 => {
            // Lemma shape m(a + b*c): quantifies the product, not the cell.
            let (cell_a, cell_b, cell_c) = if pattern == CellPattern::Product12 {
                ((1, 2), (1, 2), (2, 2))
            } else {
                ((2, 1), (2, 2), (2, 1))
            };
            for &a in frame.cell(cell_a.0, cell_a.1)? {
                for &b in frame.cell(cell_b.0, cell_b.1)? {
                    for &c in frame.cell(cell_c.0, cell_c.1)? {
                        report.pairs_checked += 1;
                        let bc = t.mul(b, c);
                        let lhs = ev(t.add(a, bc))?;
                        let rhs = ring.add(&ev(a)?, &ev(bc)?)?;
                        record(ring, &mut report, &el(a), Some(&el(bc)), Instance {
                            identity: "partial_additivity_product",
                            lhs,
                            rhs,
                        });
                    }
                }
            }
        }
        CellPattern::FullSum => {
            for &a in frame.cell(1, 1)? {
                for &b in frame.cell(1, 2)? {
                    for &c in frame.cell(2, 1)? {
                        for &d in frame.cell(2, 2)? {
                            report.pairs_checked += 1;
                            let sum = t.add(t.add(t.add(a, b), c), d);
                            let lhs = ev(sum)?;
                            let rhs = ring.add(
                                &ring.add(&ring.add(&ev(a)?, &ev(b)?)?, &ev(c)?)?,
                                &ev(d)?,
                            )?;
                            record(ring, &mut report, &el(a), Some(&el(sum)), Instance {
                                identity: "partial_additivity_full_sum",
                                lhs,
                                rhs,
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Full additivity stated in the theorems' language: `m(x+y) = m(x) + m(y)`
/// over the domain.
pub fn check_full_additivity(
    ring: &Ring,
    m: &RingMap,
    dom: &IdentityDomain,
) -> Result<DefectReport> {
    check_map_ring(ring, &[m])?;
    let mut report = DefectReport::new("full_additivity");
    let points = quantifier_points(ring, dom)?;
    for x in &points {
        for y in &points {
            report.pairs_checked += 1;
            let lhs = m.eval(ring, &ring.add(x, y)?)?;
            let rhs = ring.add(&m.eval(ring, x)?, &m.eval(ring, y)?)?;
            record(ring, &mut report, x, Some(y), Instance {
                identity: "additivity",
                lhs,
                rhs,
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{parse_map, Builtin};
    use crate::ring::RingSpec;
    use crate::Rat;

    fn qm2() -> Ring {
        Ring::new(RingSpec::RationalMatrix2).unwrap()
    }

    fn ring(lit: &str) -> Ring {
        Ring::new(lit.parse().unwrap()).unwrap()
    }

    fn grid_dom() -> IdentityDomain {
        IdentityDomain::GridRandom {
            grid_bound: 1,
            random_budget: 8,
            seed: 0,
        }
    }

    /// The first worked example's maps: d = scaledflip:2, g = zero, alpha = flip.
    fn example1(r: &Ring) -> (RingMap, RingMap, RingMap) {
        (
            RingMap::builtin(r, Builtin::ScaledFlip(Rat::from_integer(2))).unwrap(),
            RingMap::zero(r),
            RingMap::builtin(r, Builtin::FlipConj).unwrap(),
        )
    }

    /// The second worked example's maps: f = scaledflip:3, g = flip,
    /// d = zero, alpha = signconj.
    fn example2(r: &Ring) -> (RingMap, RingMap, RingMap, RingMap) {
        (
            RingMap::builtin(r, Builtin::ScaledFlip(Rat::from_integer(3))).unwrap(),
            RingMap::zero(r),
            RingMap::builtin(r, Builtin::FlipConj).unwrap(),
            RingMap::builtin(r, Builtin::SignConj).unwrap(),
        )
    }

    #[test]
    fn example1_residuals_vanish_on_grid() {
        let r = qm2();
        let (d, g, alpha) = example1(&r);
        for x in grid_matrices(1) {
            for y in grid_matrices(1) {
                let (r1, r2, r3) = ssd_defect(
                    &r,
                    &d,
                    &g,
                    &alpha,
                    &r.matrix_element(x).unwrap(),
                    &r.matrix_element(y).unwrap(),
                )
                .unwrap();
                assert!(r.is_zero(&r1) && r.is_zero(&r2) && r.is_zero(&r3));
            }
        }
    }

    #[test]
    fn zero_map_satisfies_all_residuals() {
        let r = ring("zn:6");
        let d = RingMap::zero(&r);
        let g = RingMap::identity(&r);
        let alpha = RingMap::identity(&r);
        let report =
            check_mult_skew_semi_derivation(&r, &d, &g, &alpha, &IdentityDomain::Exhaustive)
                .unwrap();
        assert!(report.holds, "{:?}", report);
    }

    #[test]
    fn example1_skew_derivation_residual_at_e21_e22() {
        // With alpha replaced by the identity in the second clause, the
        // residual r2 at (E21, E22) is -2*E12.
        let r = qm2();
        let d = RingMap::builtin(&r, Builtin::ScaledFlip(Rat::from_integer(2))).unwrap();
        let g = RingMap::zero(&r);
        let alpha = RingMap::identity(&r);
        let x = r.matrix_unit(2, 1).unwrap();
        let y = r.matrix_unit(2, 2).unwrap();
        let (_, r2, _) = ssd_defect(&r, &d, &g, &alpha, &x, &y).unwrap();
        assert_eq!(r2, r.matrix_from_ints(0, -2, 0, 0).unwrap());
    }

    #[test]
    fn example1_holds_as_skew_semi_derivation() {
        let r = qm2();
        let (d, g, alpha) = example1(&r);
        let report = check_mult_skew_semi_derivation(&r, &d, &g, &alpha, &grid_dom()).unwrap();
        assert!(report.holds, "{:?}", report.witnesses.first());
        assert!(report.pairs_checked >= 81 * 81);
    }

    #[test]
    fn example1_is_not_a_semi_derivation() {
        let r = qm2();
        let (d, g, _) = example1(&r);
        let report = check_mult_semi_derivation(&r, &d, &g, &grid_dom()).unwrap();
        assert!(!report.holds);
        // The stated witness: at (E11, E12), d(xy) = 2E21 while
        // d(x)g(y) + x d(y) = 0.
        let x = r.matrix_unit(1, 1).unwrap();
        let y = r.matrix_unit(1, 2).unwrap();
        let xy = r.mul(&x, &y).unwrap();
        let lhs = d.eval(&r, &xy).unwrap();
        let rhs = r
            .add(
                &r.mul(&d.eval(&r, &x).unwrap(), &g.eval(&r, &y).unwrap()).unwrap(),
                &r.mul(&x, &d.eval(&r, &y).unwrap()).unwrap(),
            )
            .unwrap();
        assert_eq!(lhs, r.matrix_from_ints(0, 0, 2, 0).unwrap());
        assert!(r.is_zero(&rhs));
    }

    #[test]
    fn example1_is_not_a_skew_derivation() {
        let r = qm2();
        let (d, _, alpha) = example1(&r);
        let report = check_mult_skew_derivation(&r, &d, &alpha, &grid_dom()).unwrap();
        assert!(!report.holds);
        // The stated witness: at (E21, E22), d(xy) = 0 while
        // d(x)y + alpha(x)d(y) = 2E12.
        let x = r.matrix_unit(2, 1).unwrap();
        let y = r.matrix_unit(2, 2).unwrap();
        let lhs = d.eval(&r, &r.mul(&x, &y).unwrap()).unwrap();
        let rhs = r
            .add(
                &r.mul(&d.eval(&r, &x).unwrap(), &y).unwrap(),
                &r.mul(&alpha.eval(&r, &x).unwrap(), &d.eval(&r, &y).unwrap())
                    .unwrap(),
            )
            .unwrap();
        assert!(r.is_zero(&lhs));
        assert_eq!(rhs, r.matrix_from_ints(0, 2, 0, 0).unwrap());
    }

    #[test]
    fn example2_holds_as_generalized_ssd() {
        let r = qm2();
        let (f, d, g, alpha) = example2(&r);
        let report = check_mult_generalized_ssd(&r, &f, &d, &g, &alpha, &grid_dom()).unwrap();
        assert!(report.holds, "{:?} {:?}", report.preconditions, report.witnesses.first());
    }

    #[test]
    fn example2_f_is_not_a_skew_semi_derivation() {
        let r = qm2();
        let (f, _, g, alpha) = example2(&r);
        let report = check_mult_skew_semi_derivation(&r, &f, &g, &alpha, &grid_dom()).unwrap();
        assert!(!report.holds);
        // Stated witness at (E21, E22): f(x)alpha(y) + g(x)f(y) = 3E12
        // while f(xy) = 0.
        let x = r.matrix_unit(2, 1).unwrap();
        let y = r.matrix_unit(2, 2).unwrap();
        let rhs = r
            .add(
                &r.mul(&f.eval(&r, &x).unwrap(), &alpha.eval(&r, &y).unwrap()).unwrap(),
                &r.mul(&g.eval(&r, &x).unwrap(), &f.eval(&r, &y).unwrap()).unwrap(),
            )
            .unwrap();
        let lhs = f.eval(&r, &r.mul(&x, &y).unwrap()).unwrap();
        assert_eq!(rhs, r.matrix_from_ints(0, 3, 0, 0).unwrap());
        assert!(r.is_zero(&lhs));
    }

    #[test]
    fn skew_semi_derivation_is_generalized_with_itself() {
        let r = qm2();
        let (d, g, alpha) = example1(&r);
        let report = check_mult_generalized_ssd(&r, &d, &d, &g, &alpha, &grid_dom()).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn identity_on_zn2_is_a_semi_derivation_with_zero_g() {
        let r = ring("zn:2");
        let big_d = RingMap::identity(&r);
        let g = RingMap::zero(&r);
        let report =
            check_mult_semi_derivation(&r, &big_d, &g, &IdentityDomain::Exhaustive).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn zero_map_is_a_derivation() {
        let r = ring("zn:6");
        let report =
            check_mult_derivation(&r, &RingMap::zero(&r), &IdentityDomain::Exhaustive).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn g_not_vanishing_at_zero_is_a_distinct_verdict() {
        let r = ring("zn:2");
        let g = RingMap::tabulated(&r, vec![1, 1]).unwrap();
        let report = check_mult_skew_semi_derivation(
            &r,
            &RingMap::zero(&r),
            &g,
            &RingMap::identity(&r),
            &IdentityDomain::Exhaustive,
        )
        .unwrap();
        assert!(!report.holds);
        let pre = report
            .preconditions
            .iter()
            .find(|p| p.name == "g_vanishes_at_zero")
            .unwrap();
        assert_eq!(pre.verdict, Verdict::Fails);
    }

    #[test]
    fn inner_d_failure_is_cited() {
        let r = qm2();
        let (f, _, g, alpha) = example2(&r);
        // Using f itself as the inner d: it is not a skew semi-derivation.
        let report = check_mult_generalized_ssd(&r, &f, &f, &g, &alpha, &grid_dom()).unwrap();
        assert!(!report.holds);
        let pre = report
            .preconditions
            .iter()
            .find(|p| p.name == "d_skew_semi_derivation")
            .unwrap();
        assert_eq!(pre.verdict, Verdict::Fails);
        assert!(pre.detail.as_deref().unwrap().contains("ssd_"));
    }

    #[test]
    fn shared_map_subsumption() {
        // When g and alpha are the same map, clause r1 vanishing everywhere
        // implies the skew-derivation residual with that map vanishes.
        let r = ring("zn:6");
        let alpha = RingMap::identity(&r);
        let d = RingMap::tabulated(&r, (0..6).map(|i| (5 * i) % 6).collect()).unwrap();
        let ssd = check_mult_skew_semi_derivation(&r, &d, &alpha, &alpha, &IdentityDomain::Exhaustive)
            .unwrap();
        let r1_holds = !ssd.witnesses.iter().any(|w| w.identity == "ssd_r1");
        let skew = check_mult_skew_derivation(&r, &d, &alpha, &IdentityDomain::Exhaustive).unwrap();
        if r1_holds {
            assert!(skew.holds);
        }
    }

    #[test]
    fn residuals_vanish_when_an_argument_is_zero() {
        let r = ring("zn:6");
        let d = RingMap::tabulated(&r, vec![0, 3, 1, 4, 2, 5]).unwrap(); // d(0)=0
        let g = RingMap::tabulated(&r, vec![0, 2, 4, 0, 2, 4]).unwrap(); // g(0)=0
        let alpha = RingMap::identity(&r);
        let zero = r.zero();
        for y in r.elements().unwrap() {
            let (r1, r2, _) = ssd_defect(&r, &d, &g, &alpha, &zero, &y).unwrap();
            assert!(r.is_zero(&r1) && r.is_zero(&r2));
            let (r1, r2, _) = ssd_defect(&r, &d, &g, &alpha, &y, &zero).unwrap();
            assert!(r.is_zero(&r1) && r.is_zero(&r2));
        }
    }

    #[test]
    fn partial_additivity_patterns_hold_for_additive_maps() {
        let r = ring("ut2:zn:2");
        let e = r.element(4).unwrap(); // E11
        let frame = PeirceFrame::new(&r, &e).unwrap();
        for m in [RingMap::zero(&r), RingMap::identity(&r)] {
            for pattern in LEMMA_PATTERNS {
                let report = check_partial_additivity(&m, &frame, pattern).unwrap();
                assert!(report.holds, "{pattern}");
            }
        }
    }

    #[test]
    fn violated_cross_pair_pattern_is_detected_with_witness() {
        let r = ring("ut2:zn:2");
        let e = r.element(4).unwrap(); // E11
        let frame = PeirceFrame::new(&r, &e).unwrap();
        // Build a map violating additivity across R11 + R12: identity except
        // it garbles the image of e1 + x12 for a nonzero x12.
        let t = r.table().unwrap();
        let e1 = frame.e1().index().unwrap();
        let x12 = *frame
            .cell(1, 2)
            .unwrap()
            .iter()
            .find(|&&z| z != t.zero())
            .unwrap();
        let bad_point = t.add(e1, x12);
        let mut images: Vec<usize> = (0..t.order()).collect();
        images[bad_point] = t.zero();
        let m = RingMap::tabulated(&r, images).unwrap();
        let pattern: CellPattern = "pair:11+12".parse().unwrap();
        let report = check_partial_additivity(&m, &frame, pattern).unwrap();
        assert!(!report.holds);
        let w = &report.witnesses[0];
        // Witness re-evaluates to lhs != rhs.
        let lhs = m
            .eval(&r, &r.add(&w.x, w.y.as_ref().unwrap()).unwrap())
            .unwrap();
        let rhs = r
            .add(
                &m.eval(&r, &w.x).unwrap(),
                &m.eval(&r, w.y.as_ref().unwrap()).unwrap(),
            )
            .unwrap();
        assert_ne!(lhs, rhs);
        assert_eq!(lhs, w.lhs);
        assert_eq!(rhs, w.rhs);
    }

    #[test]
    fn full_additivity_of_the_examples() {
        let r = qm2();
        let (d, _, _) = example1(&r);
        let (f, _, _, _) = example2(&r);
        let dom = grid_dom();
        assert!(check_full_additivity(&r, &d, &dom).unwrap().holds);
        assert!(check_full_additivity(&r, &f, &dom).unwrap().holds);
    }

    #[test]
    fn non_additive_tabulated_map_yields_witness() {
        let r = ring("zn:2");
        let m = parse_map(&r, "table:[1,0]").unwrap();
        let report = check_full_additivity(&r, &m, &IdentityDomain::Exhaustive).unwrap();
        assert!(!report.holds);
        assert!(!report.witnesses.is_empty());
    }

    #[test]
    fn pattern_literals_round_trip_and_reject_unknown() {
        for p in LEMMA_PATTERNS {
            let s = p.to_string();
            assert_eq!(s.parse::<CellPattern>().unwrap(), p);
        }
        assert!(matches!(
            "pair:13+12".parse::<CellPattern>(),
            Err(Error::UnknownPattern(_))
        ));
        assert!(matches!(
            "diagonal".parse::<CellPattern>(),
            Err(Error::UnknownPattern(_))
        ));
    }

    #[test]
    fn chain_consistency_on_small_rings() {
        // Full additivity holds iff all same-cell pair patterns and the full
        // four-cell sum hold together (cross-checked on order <= 16 rings).
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for lit in ["prod(zn:2,zn:2)", "ut2:zn:2", "m2:zn:2"] {
            let r = ring(lit);
            let e = r
                .find_idempotents()
                .unwrap()
                .into_iter()
                .find(|i| !i.trivial)
                .unwrap()
                .element;
            let frame = PeirceFrame::new(&r, &e).unwrap();
            let n = r.order().unwrap();
            let mut candidates: Vec<Vec<usize>> = vec![
                (0..n).collect(),
                vec![0; n],
            ];
            for _ in 0..40 {
                candidates.push((0..n).map(|_| rng.random_range(0..n)).collect());
            }
            for images in candidates {
                let m = RingMap::tabulated(&r, images).unwrap();
                let full = check_full_additivity(&r, &m, &IdentityDomain::Exhaustive)
                    .unwrap()
                    .holds;
                let pieces = LEMMA_PATTERNS.iter().all(|&p| {
                    check_partial_additivity(&m, &frame, p).unwrap().holds
                });
                assert_eq!(full, pieces, "{lit}: {}", m.describe());
            }
        }
    }
}
