//! Lines in the plane and their intersections with zero sets.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// The line `a x + b y + c = 0`, stored as coprime integers with the first
/// nonzero coefficient positive, so equal lines compare equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    a: Rational,
    b: Rational,
    c: Rational,
}

impl Line {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::invalid("line needs (a, b) != (0, 0)"));
        }
        let l = [&a, &b, &c]
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut ints: Vec<BigInt> = [&a, &b, &c]
            .iter()
            .map(|x| x.numer() * (&l / x.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let first_negative = ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in &mut ints {
            *x /= &g;
            if first_negative {
                *x = -x.clone();
            }
        }
        let mut it = ints.into_iter().map(Rational::from_integer);
        Ok(Line {
            a: it.next().unwrap(),
            b: it.next().unwrap(),
            c: it.next().unwrap(),
        })
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> Result<Self> {
        Line::new(super::int(a), super::int(b), super::int(c))
    }

    /// The line through two distinct points.
    pub fn through(p: &Point, q: &Point) -> Result<Self> {
        p.check_dim(2)?;
        q.check_dim(2)?;
        if p == q {
            return Err(Error::DegenerateSegment);
        }
        let (px, py) = (&p.coords()[0], &p.coords()[1]);
        let (qx, qy) = (&q.coords()[0], &q.coords()[1]);
        let a = qy - py;
        let b = px - qx;
        let c = -(&a * px + &b * py);
        Line::new(a, b, c)
    }

    /// `y = slope * x + intercept`.
    pub fn from_slope(slope: Rational, intercept: Rational) -> Self {
        Line::new(slope, -Rational::one(), intercept).expect("b is nonzero")
    }

    pub fn coeffs(&self) -> [&Rational; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn eval(&self, p: &Point) -> Rational {
        &self.a * &p.coords()[0] + &self.b * &p.coords()[1] + &self.c
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.eval(p).is_zero()
    }

    pub fn is_vertical(&self) -> bool {
        self.b.is_zero()
    }

    /// Two distinct points on the line.
    pub fn two_points(&self) -> (Point, Point) {
        if !self.b.is_zero() {
            let y0 = -&self.c / &self.b;
            let y1 = -(&self.c + &self.a) / &self.b;
            (
                Point::new(vec![Rational::zero(), y0]),
                Point::new(vec![Rational::one(), y1]),
            )
        } else {
            let x0 = -&self.c / &self.a;
            (
                Point::new(vec![x0.clone(), Rational::zero()]),
                Point::new(vec![x0, Rational::one()]),
            )
        }
    }

    /// Integer parametrisation `t -> (start + t dir) / den` with `den > 0`.
    pub fn parametrization(&self) -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
        let (a, b, c) = (self.a.to_integer(), self.b.to_integer(), self.c.to_integer());
        let (start, dir, den) = if !b.is_zero() {
            (vec![BigInt::zero(), -c], vec![b.clone(), -a], b)
        } else {
            (vec![-c, BigInt::zero()], vec![BigInt::zero(), a.clone()], a)
        };
        if den.is_negative() {
            (
                start.into_iter().map(|x| -x).collect(),
                dir.into_iter().map(|x| -x).collect(),
                -den,
            )
        } else {
            (start, dir, den)
        }
    }

    /// The line as a degree-one polynomial.
    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            2,
            vec![
                (vec![1, 0], self.a.clone()),
                (vec![0, 1], self.b.clone()),
                (vec![0, 0], self.c.clone()),
            ],
        )
        .expect("two variables")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineIntersection {
    /// The line lies inside the zero set.
    ContainedInZ,
    /// Number of distinct intersection points; never exceeds the degree.
    Count(usize),
}

/// Intersects a bivariate polynomial's zero set with a line: either the line
/// is contained in it or they meet in at most `deg f` points.
pub fn line_zero_intersections(f: &MultiPoly, line: &Line) -> Result<LineIntersection> {
    if f.num_vars() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: f.num_vars(),
        });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (p, q) = line.two_points();
    let g = f.restrict_to_segment(&p, &q)?;
    if g.is_zero() {
        return Ok(LineIntersection::ContainedInZ);
    }
    let count = g.count_real_roots()?;
    debug_assert!(count as u32 <= f.degree());
    Ok(LineIntersection::Count(count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn circle() -> MultiPoly {
        MultiPoly::from_terms(
            2,
            vec![
                (vec![2, 0], int(1)),
                (vec![0, 2], int(1)),
                (vec![0, 0], int(-1)),
            ],
        )
        .unwrap()
    }

    fn xy() -> MultiPoly {
        MultiPoly::from_terms(2, vec![(vec![1, 1], int(1))]).unwrap()
    }

    #[test]
    fn intersection_examples() {
        let y0 = Line::from_ints(0, 1, 0).unwrap();
        assert_eq!(
            line_zero_intersections(&circle(), &y0).unwrap(),
            LineIntersection::Count(2)
        );
        let x0 = Line::from_ints(1, 0, 0).unwrap();
        assert_eq!(
            line_zero_intersections(&xy(), &x0).unwrap(),
            LineIntersection::ContainedInZ
        );
        let y1 = Line::from_ints(0, 1, -1).unwrap();
        assert_eq!(
            line_zero_intersections(&xy(), &y1).unwrap(),
            LineIntersection::Count(1)
        );
    }

    #[test]
    fn intersection_rejects_zero_poly() {
        let l = Line::from_ints(1, 1, 0).unwrap();
        assert!(matches!(
            line_zero_intersections(&MultiPoly::zero(2, 2), &l),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn normalization() {
        let a = Line::new(rat(-1, 2), int(1), rat(3, 4)).unwrap();
        let b = Line::from_ints(2, -4, -3).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.coeffs(), [&int(2), &int(-4), &int(-3)]);
        assert!(Line::from_ints(0, 0, 1).is_err());
        let t = Line::through(&Point::from_ints(&[0, 0]), &Point::from_ints(&[2, 2])).unwrap();
        assert_eq!(t, Line::from_ints(1, -1, 0).unwrap());
        let (p, q) = t.two_points();
        assert!(t.contains(&p) && t.contains(&q) && p != q);
        let v = Line::from_ints(3, 0, -1).unwrap();
        let (p, q) = v.two_points();
        assert!(v.contains(&p) && v.contains(&q) && p != q);
    }
}
