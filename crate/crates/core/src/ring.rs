use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Commutative Q-algebra of coefficients for series and jets.
///
/// Implemented by the nilpotent base rings and by the symbolic coordinate
/// ring. All elements carry their own `Shape`, and binary operations assume
/// equal shapes; the series layer checks shapes once at its entry points.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync + 'static {
    type Shape: Clone + PartialEq + Debug + Send + Sync;

    fn shape(&self) -> Self::Shape;
    fn zero(shape: &Self::Shape) -> Self;
    fn from_rational(shape: &Self::Shape, q: BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_inverse(&self) -> Option<Self>;
    fn is_nilpotent(&self) -> bool;

    /// Least `nu` with `Nil(R)^nu = 0`.
    fn nilpotency_index(shape: &Self::Shape) -> usize;

    /// Drops the part of `self` lying in `Nil(R)^(max_weight + 1)`.
    fn truncate_nil_weight(&self, _max_weight: usize) -> Self {
        self.clone()
    }

    /// Largest `k` with `self` in `Nil(R)^k` (`usize::MAX` for zero).
    fn nil_weight(&self) -> usize {
        if self.is_zero() {
            usize::MAX
        } else {
            0
        }
    }

    /// `self += (a * b).truncate_nil_weight(max_weight)`.
    fn add_product(&mut self, a: &Self, b: &Self, max_weight: usize) {
        *self = self.add(&a.mul_truncated(b, max_weight));
    }

    /// `(self * other).truncate_nil_weight(max_weight)`, possibly cheaper.
    fn mul_truncated(&self, other: &Self, max_weight: usize) -> Self {
        self.mul(other).truncate_nil_weight(max_weight)
    }

    fn one(shape: &Self::Shape) -> Self {
        Self::from_rational(shape, BigRational::one())
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn scale(&self, q: &BigRational) -> Self {
        self.mul(&Self::from_rational(&self.shape(), q.clone()))
    }

    fn is_one(&self) -> bool {
        *self == Self::one(&self.shape())
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.shape());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Formats as `p` or `p/q`, always reduced.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` (no decimals).
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// `det` of a square matrix over a ring, by cofactor expansion.
pub fn determinant<R: Ring>(m: &[Vec<R>], shape: &R::Shape) -> R {
    let n = m.len();
    match n {
        0 => R::one(shape),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = R::zero(shape);
            for col in 0..n {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor = minor(m, 0, col);
                let term = m[0][col].mul(&determinant(&minor, shape));
                acc = if col % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

fn minor<R: Ring>(m: &[Vec<R>], row: usize, col: usize) -> Vec<Vec<R>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// Inverse of a square matrix via the adjugate; `None` if `det` is not a unit.
pub fn invert_matrix<R: Ring>(m: &[Vec<R>], shape: &R::Shape) -> Option<Vec<Vec<R>>> {
    let n = m.len();
    let det_inv = determinant(m, shape).try_inverse()?;
    if n == 1 {
        return Some(vec![vec![det_inv]]);
    }
    let mut inv = vec![vec![R::zero(shape); n]; n];
    for (i, row) in inv.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            // adj(m)[i][j] = (-1)^(i+j) det(minor(m, j, i))
            let c = determinant(&minor(m, j, i), shape);
            let c = if (i + j) % 2 == 0 { c } else { c.neg() };
            *slot = c.mul(&det_inv);
        }
    }
    Some(inv)
}

pub fn matmul<R: Ring>(a: &[Vec<R>], b: &[Vec<R>], shape: &R::Shape) -> Vec<Vec<R>> {
    let rows = a.len();
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![R::zero(shape); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&rational(6, -4)), "-3/2");
        assert_eq!(parse_rational(" -3/2 ").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert!(parse_rational("1.5").is_err());
        assert!(parse_rational("1/0").is_err());
    }
}
