//! Univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_traits::{One, Zero};

use super::intpoly::{IntUniPoly, SturmChain};
use super::{format_rational, Rational};
use crate::error::{Error, Result};

/// Dense coefficient list, lowest degree first, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        UniPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn to_int(&self) -> IntUniPoly {
        IntUniPoly::from_rational(&self.coeffs)
    }

    /// Number of distinct real roots in `(a, b)` (open) or `[a, b]`.
    ///
    /// Fails with [`Error::ContainedInZeroSet`] when `self` is identically
    /// zero, since then every point of the interval is a root.
    pub fn count_roots_in_interval(&self, a: &Rational, b: &Rational, open: bool) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ContainedInZeroSet);
        }
        if a >= b {
            return Err(Error::EmptyInterval);
        }
        Ok(SturmChain::new(&self.to_int()).count_in_interval(a, b, open))
    }

    /// Number of distinct real roots on the whole line.
    pub fn count_real_roots(&self) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ContainedInZeroSet);
        }
        Ok(SturmChain::new(&self.to_int()).count_all())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format_rational(c),
                1 => format!("{}*t", format_rational(c)),
                _ => format!("{}*t^{i}", format_rational(c)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Rational::zero();
        UniPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) - rhs.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}

impl From<Vec<i64>> for UniPoly {
    fn from(v: Vec<i64>) -> Self {
        UniPoly::new(v.into_iter().map(super::int).collect())
    }
}

impl UniPoly {
    pub fn one() -> Self {
        UniPoly::constant(Rational::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    #[test]
    fn root_count_examples() {
        let p = UniPoly::from(vec![-1, 0, 1]);
        assert_eq!(p.count_roots_in_interval(&int(-2), &int(2), true).unwrap(), 2);
        let p = UniPoly::from(vec![1, 0, 1]);
        assert_eq!(p.count_roots_in_interval(&int(-10), &int(10), true).unwrap(), 0);
        let p = UniPoly::from(vec![0, 0, 1]);
        assert_eq!(p.count_roots_in_interval(&int(-1), &int(1), true).unwrap(), 1);
    }

    #[test]
    fn root_count_endpoints() {
        // roots at -1 and 1
        let p = UniPoly::from(vec![-1, 0, 1]);
        assert_eq!(p.count_roots_in_interval(&int(-1), &int(1), true).unwrap(), 0);
        assert_eq!(p.count_roots_in_interval(&int(-1), &int(1), false).unwrap(), 2);
        assert_eq!(p.count_roots_in_interval(&int(0), &int(1), false).unwrap(), 1);
        assert_eq!(p.count_roots_in_interval(&int(1), &int(3), true).unwrap(), 0);
        // (t-1)^3 (t+2)^2, multiple roots at both ends
        let a = UniPoly::from(vec![-1, 1]);
        let b = UniPoly::from(vec![2, 1]);
        let p = &(&(&a * &a) * &a) * &(&b * &b);
        assert_eq!(p.count_roots_in_interval(&int(-2), &int(1), false).unwrap(), 2);
        assert_eq!(p.count_roots_in_interval(&int(-2), &int(1), true).unwrap(), 0);
        assert_eq!(p.count_real_roots().unwrap(), 2);
    }

    #[test]
    fn root_count_errors() {
        assert!(matches!(
            UniPoly::zero().count_roots_in_interval(&int(0), &int(1), true),
            Err(Error::ContainedInZeroSet)
        ));
        let p = UniPoly::from(vec![1, 1]);
        assert!(matches!(
            p.count_roots_in_interval(&int(1), &int(1), true),
            Err(Error::EmptyInterval)
        ));
    }

    #[test]
    fn eval_and_trim() {
        let p = UniPoly::new(vec![int(1), int(2), int(0), int(0)]);
        assert_eq!(p.degree(), 1);
        assert_eq!(p.eval(&rat(1, 2)), int(2));
        assert!(UniPoly::new(vec![int(0)]).is_zero());
    }
}
