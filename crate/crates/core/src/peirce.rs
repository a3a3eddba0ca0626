//! Peirce decomposition relative to a non-trivial idempotent.
//!
//! With e1 = e and e2 = 1 - e, the ring splits as the direct sum of the four
//! cells R_ij = e_i R e_j. Cell membership is tested operationally:
//! z lies in R_ij iff e_i * z * e_j = z, so no cell sets need storing
//! (tabulated frames precompute them anyway, because the hypothesis checkers
//! scan cells in their inner loops).

use serde::{Deserialize, Serialize};

use crate::domain::grid_matrices;
use crate::error::{Error, Result};
use crate::report::{DefectReport, IdentityWitness};
use crate::ring::{Element, Ring};

/// A ring together with a chosen non-trivial idempotent e1 and its
/// complement e2 = 1 - e1.
#[derive(Debug, Clone)]
pub struct PeirceFrame {
    ring: Ring,
    e1: Element,
    e2: Element,
    /// Cell membership lists (indices), tabulated rings only; order 11,12,21,22.
    cells: Option<[Vec<usize>; 4]>,
}

/// The four cell coordinates of an element: c_ij = e_i * x * e_j.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeirceCoords {
    pub c11: Element,
    pub c12: Element,
    pub c21: Element,
    pub c22: Element,
}

impl PeirceCoords {
    pub fn get(&self, i: u8, j: u8) -> &Element {
        match (i, j) {
            (1, 1) => &self.c11,
            (1, 2) => &self.c12,
            (2, 1) => &self.c21,
            (2, 2) => &self.c22,
            _ => panic!("cell indices must be 1 or 2"),
        }
    }
}

pub const CELL_INDICES: [(u8, u8); 4] = [(1, 1), (1, 2), (2, 1), (2, 2)];

impl PeirceFrame {
    /// Builds a frame for `e`, verifying at construction that `e` is a
    /// non-trivial idempotent and that e1, e2 are orthogonal complements.
    pub fn new(ring: &Ring, e: &Element) -> Result<PeirceFrame> {
        let square = ring.mul(e, e)?;
        if square != *e {
            return Err(Error::NotIdempotent {
                element: e.to_string(),
                square: square.to_string(),
            });
        }
        if *e == ring.zero() || *e == ring.one() {
            return Err(Error::TrivialIdempotent {
                element: e.to_string(),
            });
        }
        let e2 = ring.sub(&ring.one(), e)?;
        let verify = |name: &str, lhs: &Element, rhs: &Element| -> Result<()> {
            if lhs == rhs {
                Ok(())
            } else {
                Err(Error::InvalidSpec {
                    field: format!("frame.{name}"),
                    reason: format!("{lhs} != {rhs}"),
                })
            }
        };
        verify("e2_idempotent", &ring.mul(&e2, &e2)?, &e2)?;
        verify("e1_e2_orthogonal", &ring.mul(e, &e2)?, &ring.zero())?;
        verify("e2_e1_orthogonal", &ring.mul(&e2, e)?, &ring.zero())?;
        verify("e1_plus_e2", &ring.add(e, &e2)?, &ring.one())?;

        let cells = if let Some(t) = ring.table() {
            let (i1, i2) = (e.index().unwrap(), e2.index().unwrap());
            let side = |k: u8| if k == 1 { i1 } else { i2 };
            let mut cells: [Vec<usize>; 4] = Default::default();
            for (slot, (i, j)) in CELL_INDICES.iter().enumerate() {
                for z in 0..t.order() {
                    if t.mul(t.mul(side(*i), z), side(*j)) == z {
                        cells[slot].push(z);
                    }
                }
            }
            Some(cells)
        } else {
            None
        };

        Ok(PeirceFrame {
            ring: ring.clone(),
            e1: e.clone(),
            e2,
            cells,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn e1(&self) -> &Element {
        &self.e1
    }

    pub fn e2(&self) -> &Element {
        &self.e2
    }

    fn side(&self, k: u8) -> &Element {
        if k == 1 {
            &self.e1
        } else {
            &self.e2
        }
    }

    /// Table indices of e1 and e2 (tabulated rings).
    pub fn idempotent_indices(&self) -> Option<(usize, usize)> {
        Some((self.e1.index()?, self.e2.index()?))
    }

    /// Membership list of cell R_ij, tabulated rings only.
    pub fn cell(&self, i: u8, j: u8) -> Result<&[usize]> {
        let cells = self
            .cells
            .as_ref()
            .ok_or(Error::UnsupportedStructural { op: "cell listing" })?;
        let slot = CELL_INDICES
            .iter()
            .position(|&c| c == (i, j))
            .expect("cell indices must be 1 or 2");
        Ok(&cells[slot])
    }

    pub fn cell_elements(&self, i: u8, j: u8) -> Result<Vec<Element>> {
        self.cell(i, j)?
            .iter()
            .map(|&z| self.ring.element(z))
            .collect()
    }

    /// Operational cell membership: e_i * z * e_j = z.
    pub fn in_cell(&self, i: u8, j: u8, z: &Element) -> Result<bool> {
        let proj = self
            .ring
            .mul(&self.ring.mul(self.side(i), z)?, self.side(j))?;
        Ok(proj == *z)
    }

    /// The four projections c_ij = e_i * x * e_j.
    pub fn project(&self, x: &Element) -> Result<PeirceCoords> {
        let proj = |i: u8, j: u8| -> Result<Element> {
            self.ring.mul(&self.ring.mul(self.side(i), x)?, self.side(j))
        };
        Ok(PeirceCoords {
            c11: proj(1, 1)?,
            c12: proj(1, 2)?,
            c21: proj(2, 1)?,
            c22: proj(2, 2)?,
        })
    }

    /// Sums the four coordinates after validating each lies in its cell.
    pub fn reconstruct(&self, coords: &PeirceCoords) -> Result<Element> {
        for (i, j) in CELL_INDICES {
            let c = coords.get(i, j);
            if !self.in_cell(i, j, c)? {
                return Err(Error::CellViolation {
                    i,
                    j,
                    element: c.to_string(),
                });
            }
        }
        let s = self.ring.add(&coords.c11, &coords.c12)?;
        let s = self.ring.add(&s, &coords.c21)?;
        self.ring.add(&s, &coords.c22)
    }

    /// Verifies the cell algebra: R_ij * R_jl lands in R_il, and
    /// R_ij * R_kl = {0} when j != k. Exhaustive on tabulated rings; on the
    /// structural ring a grid-sampled variant runs instead (sound but
    /// incomplete, like every structural-domain check).
    pub fn cell_product_check(&self) -> Result<DefectReport> {
        let mut report = DefectReport::new("cell_products");
        let members: Vec<((u8, u8), Vec<Element>)> = if self.ring.table().is_some() {
            CELL_INDICES
                .iter()
                .map(|&(i, j)| Ok(((i, j), self.cell_elements(i, j)?)))
                .collect::<Result<_>>()?
        } else {
            // Grid bound 1 keeps the pair scan at 81^2 per cell combination.
            let grid = grid_matrices(1);
            let mut cells = Vec::new();
            for (i, j) in CELL_INDICES {
                let mut members = Vec::new();
                for m in &grid {
                    let x = self.ring.matrix_element(*m)?;
                    let c = self
                        .ring
                        .mul(&self.ring.mul(self.side(i), &x)?, self.side(j))?;
                    if !members.contains(&c) {
                        members.push(c);
                    }
                }
                cells.push(((i, j), members));
            }
            cells
        };
        for ((i, j), left) in &members {
            for ((k, l), right) in &members {
                for u in left {
                    for v in right {
                        report.pairs_checked += 1;
                        let p = self.ring.mul(u, v)?;
                        if j == k {
                            if !self.in_cell(*i, *l, &p)? {
                                report.witness(IdentityWitness {
                                    identity: format!("cell_product_{i}{j}x{k}{l}_in_{i}{l}"),
                                    x: u.clone(),
                                    y: Some(v.clone()),
                                    z: None,
                                    lhs: p.clone(),
                                    rhs: self.ring.zero(),
                                });
                            }
                        } else if !self.ring.is_zero(&p) {
                            report.witness(IdentityWitness {
                                identity: format!("cell_product_{i}{j}x{k}{l}_zero"),
                                x: u.clone(),
                                y: Some(v.clone()),
                                z: None,
                                lhs: p.clone(),
                                rhs: self.ring.zero(),
                            });
                        }
                    }
                }
            }
        }
        Ok(report)
    }

    /// Direct-sum independence: if c11 + c12 + c21 + c22 = 0 with each c_ij
    /// in its cell, then every c_ij = 0. Exhaustive over cell tuples on
    /// tabulated rings.
    pub fn directness_check(&self) -> Result<DefectReport> {
        let mut report = DefectReport::new("direct_sum_independence");
        let t = self.ring.require_table("directness_check")?;
        let zero = t.zero();
        for &a in self.cell(1, 1)? {
            for &b in self.cell(1, 2)? {
                for &c in self.cell(2, 1)? {
                    for &d in self.cell(2, 2)? {
                        report.pairs_checked += 1;
                        let sum = t.add(t.add(t.add(a, b), c), d);
                        if sum == zero && !(a == zero && b == zero && c == zero && d == zero) {
                            report.witness(IdentityWitness {
                                identity: "direct_sum_independence".into(),
                                x: self.ring.element(a)?,
                                y: Some(self.ring.element(b)?),
                                z: Some(self.ring.element(c)?),
                                lhs: self.ring.element(sum)?,
                                rhs: self.ring.element(zero)?,
                            });
                        }
                    }
                }
            }
        }
        Ok(report)
    }
}
