//! 2x2 matrices over a generic scalar.
//!
//! The structural ring and the builtin maps only ever need exact rational
//! entries (see [`crate::Mat2q`]), but the arithmetic itself is scalar-agnostic:
//! anything with ring operations and `Zero`/`One` works.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Rat;

/// Scalar types usable as 2x2 matrix entries.
pub trait Scalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// A 2x2 matrix in row-major order: `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Scalar> Mat2<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn zero() -> Self {
        Mat2::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), T::one())
    }

    /// Matrix unit with a single 1 in row `i`, column `j` (1-based).
    pub fn unit(i: u8, j: u8) -> Self {
        let mut m = Self::zero();
        *match (i, j) {
            (1, 1) => &mut m.a,
            (1, 2) => &mut m.b,
            (2, 1) => &mut m.c,
            (2, 2) => &mut m.d,
            _ => panic!("matrix unit indices must be 1 or 2"),
        } = T::one();
        m
    }

    /// The exchange matrix `E12 + E21`; conjugation by it swaps both rows and columns.
    pub fn exchange() -> Self {
        Mat2::new(T::zero(), T::one(), T::one(), T::zero())
    }

    /// `diag(1, -1)`; conjugation by it negates the off-diagonal entries.
    pub fn sign_diag() -> Self {
        Mat2::new(T::one(), T::zero(), T::zero(), -T::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        Mat2::new(
            self.a.clone() + other.a.clone(),
            self.b.clone() + other.b.clone(),
            self.c.clone() + other.c.clone(),
            self.d.clone() + other.d.clone(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Mat2::new(
            self.a.clone() - other.a.clone(),
            self.b.clone() - other.b.clone(),
            self.c.clone() - other.c.clone(),
            self.d.clone() - other.d.clone(),
        )
    }

    pub fn neg(&self) -> Self {
        Mat2::new(
            -self.a.clone(),
            -self.b.clone(),
            -self.c.clone(),
            -self.d.clone(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        Mat2::new(
            self.a.clone() * other.a.clone() + self.b.clone() * other.c.clone(),
            self.a.clone() * other.b.clone() + self.b.clone() * other.d.clone(),
            self.c.clone() * other.a.clone() + self.d.clone() * other.c.clone(),
            self.c.clone() * other.b.clone() + self.d.clone() * other.d.clone(),
        )
    }

    pub fn scale(&self, k: &T) -> Self {
        Mat2::new(
            k.clone() * self.a.clone(),
            k.clone() * self.b.clone(),
            k.clone() * self.c.clone(),
            k.clone() * self.d.clone(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

fn scalar_to_string(r: &Rat) -> String {
    if r.denom() == &1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn rat_from_str(s: &str) -> Result<Rat> {
    let parse_int = |t: &str| -> Result<i64> {
        t.trim().parse::<i64>().map_err(|_| Error::Parse {
            position: 0,
            expected: "integer".into(),
            found: t.into(),
        })
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let denom = parse_int(d)?;
            if denom == 0 {
                return Err(Error::Parse {
                    position: 0,
                    expected: "non-zero denominator".into(),
                    found: s.into(),
                });
            }
            Ok(Rat::new(parse_int(n)?, denom))
        }
        None => Ok(Rat::from_integer(parse_int(s)?)),
    }
}

impl fmt::Display for Mat2<Rat> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{},{}],[{},{}]]",
            scalar_to_string(&self.a),
            scalar_to_string(&self.b),
            scalar_to_string(&self.c),
            scalar_to_string(&self.d)
        )
    }
}

/// Parses the `Display` form `[[a,b],[c,d]]` with integer or `p/q` entries.
pub fn mat2q_from_str(s: &str) -> Result<Mat2<Rat>> {
    let err = |expected: &str, found: &str| Error::Parse {
        position: 0,
        expected: expected.into(),
        found: found.into(),
    };
    let inner = s
        .trim()
        .strip_prefix("[[")
        .and_then(|t| t.strip_suffix("]]"))
        .ok_or_else(|| err("[[a,b],[c,d]]", s))?;
    let (row1, row2) = inner
        .split_once("],[")
        .ok_or_else(|| err("two rows separated by ],[", s))?;
    let mut entries = Vec::with_capacity(4);
    for row in [row1, row2] {
        let (x, y) = row.split_once(',').ok_or_else(|| err("a,b", row))?;
        entries.push(rat_from_str(x)?);
        entries.push(rat_from_str(y)?);
    }
    Ok(Mat2::new(entries[0], entries[1], entries[2], entries[3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Mat2q;

    fn ri(n: i64) -> Rat {
        Rat::from_integer(n)
    }

    #[test]
    fn matrix_unit_products() {
        // E_ij * E_kl = delta_jk * E_il
        for i in 1..=2u8 {
            for j in 1..=2u8 {
                for k in 1..=2u8 {
                    for l in 1..=2u8 {
                        let p = Mat2q::unit(i, j).mul(&Mat2q::unit(k, l));
                        let expect = if j == k { Mat2q::unit(i, l) } else { Mat2q::zero() };
                        assert_eq!(p, expect, "E{}{} * E{}{}", i, j, k, l);
                    }
                }
            }
        }
    }

    #[test]
    fn exchange_conjugation_swaps_rows_and_columns() {
        let j = Mat2q::exchange();
        let x = Mat2q::new(ri(1), ri(2), ri(3), ri(4));
        let jxj = j.mul(&x).mul(&j);
        assert_eq!(jxj, Mat2q::new(ri(4), ri(3), ri(2), ri(1)));
    }

    #[test]
    fn sign_conjugation_negates_off_diagonal() {
        let d = Mat2q::sign_diag();
        let x = Mat2q::new(ri(1), ri(2), ri(3), ri(4));
        let dxd = d.mul(&x).mul(&d);
        assert_eq!(dxd, Mat2q::new(ri(1), ri(-2), ri(-3), ri(4)));
    }

    #[test]
    fn display_and_parse_round_trip() {
        let x = Mat2q::new(Rat::new(1, 2), ri(-3), ri(0), Rat::new(7, 5));
        let s = x.to_string();
        assert_eq!(s, "[[1/2,-3],[0,7/5]]");
        assert_eq!(mat2q_from_str(&s).unwrap(), x);
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(mat2q_from_str("[[1/0,0],[0,0]]").is_err());
    }
}
