//! Simultaneous bisection of point sets by a single polynomial.
//!
//! Lifting a point through the Veronese map turns the sign of a degree-`D`
//! polynomial into the side of an affine hyperplane in the lifted space, so
//! bisecting `s` sets with a polynomial is a hyperplane problem in dimension
//! `binom(D + d, d) - 1`. The search in [`search`] works on that hyperplane
//! with a smoothed objective and hands every candidate to
//! [`verify_bisection`], which counts signs exactly.

mod certificate;
mod oracle;
mod search;

pub use certificate::{verify_bisection, BisectionCertificate, SetCounts};
pub use oracle::exact_bisector_oracle;
pub use search::{find_bisecting_polynomial, find_bisecting_polynomial_with, Bisector, SearchConfig, TraceRow};

use crate::algebra::{monomials, Rational};
use crate::geometry::Point;
use num_traits::One;

/// A point mapped to the values of all nonconstant monomials of degree at
/// most `D`, in the global monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedPoint {
    pub coords: Vec<Rational>,
    pub source: usize,
}

impl LiftedPoint {
    pub fn new(source: usize, p: &Point, degree: u32) -> Self {
        LiftedPoint {
            coords: veronese_lift(p, degree),
            source,
        }
    }
}

/// Values of the nonconstant monomials of degree at most `degree` at `p`.
pub fn veronese_lift(p: &Point, degree: u32) -> Vec<Rational> {
    let mut out = lift_with_constant(p, degree);
    out.remove(0);
    out
}

/// The lift with the constant monomial `1` prepended.
pub(crate) fn lift_with_constant(p: &Point, degree: u32) -> Vec<Rational> {
    let d = p.dim();
    let deg = degree as usize;
    let powers: Vec<Vec<Rational>> = p
        .coords()
        .iter()
        .map(|x| {
            let mut pw = vec![Rational::one()];
            for k in 1..=deg {
                let next = &pw[k - 1] * x;
                pw.push(next);
            }
            pw
        })
        .collect();
    monomials(d, degree)
        .iter()
        .map(|e| {
            e.as_slice()
                .iter()
                .enumerate()
                .fold(Rational::one(), |acc, (i, &k)| acc * &powers[i][k as usize])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, monomial_count, MultiPoly};
    use crate::geometry::sign_of;

    #[test]
    fn lift_examples() {
        let p = Point::from_ints(&[2, 3]);
        assert_eq!(
            veronese_lift(&p, 2),
            vec![int(2), int(3), int(4), int(6), int(9)]
        );
        let z = Point::from_ints(&[0, 0, 0]);
        let l = veronese_lift(&z, 3);
        assert_eq!(l.len(), monomial_count(3, 3));
        assert!(l.iter().all(|x| *x == int(0)));
        let q = Point::from_fracs(&[(1, 3), (-2, 5)]);
        assert_eq!(veronese_lift(&q, 1), q.coords().to_vec());
        assert_eq!(LiftedPoint::new(4, &q, 1).source, 4);
    }

    #[test]
    fn lifted_hyperplane_matches_polynomial_sign() {
        let f = MultiPoly::from_terms(
            2,
            vec![
                (vec![0, 0], int(-3)),
                (vec![2, 0], int(1)),
                (vec![1, 1], int(-2)),
                (vec![0, 2], int(5)),
            ],
        )
        .unwrap()
        .with_max_degree(2);
        let coeffs = f.coeff_vector();
        for (x, y) in [(0, 0), (1, 1), (2, -1), (-3, 1)] {
            let p = Point::from_ints(&[x, y]);
            let lifted = veronese_lift(&p, 2);
            let h = lifted
                .iter()
                .zip(&coeffs[1..])
                .fold(coeffs[0].clone(), |acc, (a, b)| acc + a * b);
            assert_eq!(sign_of(&h), sign_of(&f.eval_point(&p).unwrap()));
        }
    }
}
