//! Points with exact rational coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{rat, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| rat(c, 1)).collect())
    }

    /// Builds a point from `(numerator, denominator)` pairs.
    pub fn from_fracs(coords: &[(i64, i64)]) -> Self {
        Point(coords.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(crate::algebra::to_f64).collect()
    }

    pub fn sub(&self, other: &Point) -> Vec<Rational> {
        self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()
    }

    /// `self + t (other - self)`.
    pub fn lerp(&self, other: &Point, t: &Rational) -> Point {
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + t * (b - a))
                .collect(),
        )
    }

    pub fn squared_distance(&self, other: &Point) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    /// Coordinates over the point's own common denominator.
    pub fn to_integer_coords(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .0
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.0.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        (nums, den)
    }

    pub(crate) fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<Rational>> for Point {
    fn from(v: Vec<Rational>) -> Self {
        Point(v)
    }
}

/// A set of points written over one common positive denominator:
/// point `i` is `nums[i] / den`.
#[derive(Debug, Clone)]
pub struct IntPoints {
    pub nums: Vec<Vec<BigInt>>,
    pub den: BigInt,
}

impl IntPoints {
    pub fn new(points: &[Point]) -> Self {
        let mut den = BigInt::one();
        for p in points {
            for c in p.coords() {
                den = den.lcm(c.denom());
            }
        }
        let nums = points
            .iter()
            .map(|p| {
                p.coords()
                    .iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect()
            })
            .collect();
        IntPoints { nums, den }
    }

    /// Largest bit length among numerators and the denominator.
    pub fn max_bits(&self) -> u64 {
        self.nums
            .iter()
            .flatten()
            .map(|x| x.abs().bits())
            .chain(std::iter::once(self.den.bits()))
            .max()
            .unwrap_or(0)
    }

    /// Numerators as `i128` when every value fits in `bits` bits.
    pub fn to_i128(&self, bits: u64) -> Option<Vec<Vec<i128>>> {
        if self.max_bits() > bits {
            return None;
        }
        Some(
            self.nums
                .iter()
                .map(|p| {
                    p.iter()
                        .map(|x| i128::try_from(x.clone()).expect("bit length checked"))
                        .collect()
                })
                .collect(),
        )
    }
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign_of(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sign of a big integer as -1, 0 or +1.
pub fn sign_of_int(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn common_denominator() {
        let pts = vec![
            Point::from_fracs(&[(1, 2), (1, 3)]),
            Point::from_fracs(&[(-5, 6), (2, 1)]),
        ];
        let ip = IntPoints::new(&pts);
        assert_eq!(ip.den, BigInt::from(6));
        assert_eq!(ip.nums[0], vec![BigInt::from(3), BigInt::from(2)]);
        assert_eq!(ip.nums[1], vec![BigInt::from(-5), BigInt::from(12)]);
        assert!(ip.to_i128(8).is_some());
        assert!(ip.to_i128(2).is_none());
    }

    #[test]
    fn lerp_and_distance() {
        let p = Point::from_ints(&[0, 0]);
        let q = Point::from_ints(&[2, 4]);
        assert_eq!(p.lerp(&q, &rat(1, 2)), Point::from_ints(&[1, 2]));
        assert_eq!(p.squared_distance(&q), rat(20, 1));
    }
}
