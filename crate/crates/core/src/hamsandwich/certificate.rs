use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::algebra::{format_rational, signs_at_points, MultiPoly, Rational};
use crate::geometry::Point;

/// Exact sign counts of a polynomial on one point set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetCounts {
    pub pos: usize,
    pub neg: usize,
    pub zero: usize,
    pub pass: bool,
}

impl SetCounts {
    pub fn size(&self) -> usize {
        self.pos + self.neg + self.zero
    }
}

/// Per-set sign counts with the slack they were judged at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BisectionCertificate {
    pub sets: Vec<SetCounts>,
    /// The slack as `num/den` text.
    pub slack: String,
}

impl BisectionCertificate {
    pub fn passes(&self) -> bool {
        self.sets.iter().all(|s| s.pass)
    }

    pub fn failing_sets(&self) -> usize {
        self.sets.iter().filter(|s| !s.pass).count()
    }

    /// Total number of points above the per-side cap, summed over sets.
    pub fn total_excess(&self, eps: &Rational) -> usize {
        self.sets
            .iter()
            .map(|s| {
                let cap = side_cap(s.size(), eps);
                s.pos.saturating_sub(cap) + s.neg.saturating_sub(cap)
            })
            .sum()
    }
}

/// `floor(n / 2) + ceil(eps * n)`: the most points allowed on either side.
pub fn side_cap(n: usize, eps: &Rational) -> usize {
    let slack = eps * Rational::from_integer(BigInt::from(n));
    let (q, r) = slack.numer().div_rem(slack.denom());
    let ceil = if r > BigInt::from(0) { q + 1 } else { q };
    n / 2 + ceil.to_usize().unwrap_or(usize::MAX / 2)
}

pub(crate) fn counts_from_signs(signs: &[i8], eps: &Rational) -> SetCounts {
    let pos = signs.iter().filter(|&&s| s > 0).count();
    let neg = signs.iter().filter(|&&s| s < 0).count();
    let zero = signs.len() - pos - neg;
    let cap = side_cap(signs.len(), eps);
    SetCounts {
        pos,
        neg,
        zero,
        pass: pos <= cap && neg <= cap,
    }
}

/// Counts exactly how `f` splits each set and judges the split at slack
/// `eps`. Points where `f` vanishes count toward neither side.
pub fn verify_bisection(f: &MultiPoly, sets: &[Vec<Point>], eps: &Rational) -> BisectionCertificate {
    BisectionCertificate {
        sets: sets
            .iter()
            .map(|s| counts_from_signs(&signs_at_points(f, s), eps))
            .collect(),
        slack: format_rational(eps),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    fn x_minus(c: i64) -> MultiPoly {
        MultiPoly::from_terms(2, vec![(vec![1, 0], int(1)), (vec![0, 0], int(-c))]).unwrap()
    }

    #[test]
    fn certificate_examples() {
        let set = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[1, 0]),
            Point::from_ints(&[2, 0]),
        ];
        let c = verify_bisection(&x_minus(1), &[set], &rat(0, 1));
        assert_eq!(
            c.sets[0],
            SetCounts {
                pos: 1,
                neg: 1,
                zero: 1,
                pass: true
            }
        );

        let set = vec![Point::from_ints(&[1, 0]), Point::from_ints(&[2, 0])];
        let c = verify_bisection(&x_minus(0), &[set], &rat(0, 1));
        assert_eq!((c.sets[0].pos, c.sets[0].neg, c.sets[0].zero), (2, 0, 0));
        assert!(!c.passes());

        let circle = MultiPoly::from_terms(
            2,
            vec![(vec![2, 0], int(1)), (vec![0, 2], int(1)), (vec![0, 0], int(-1))],
        )
        .unwrap();
        let set = vec![
            Point::from_ints(&[0, 0]),
            Point::from_ints(&[2, 0]),
            Point::from_ints(&[0, 2]),
            Point::from_ints(&[3, 3]),
        ];
        let c = verify_bisection(&circle, &[set], &rat(0, 1));
        assert_eq!((c.sets[0].pos, c.sets[0].neg, c.sets[0].zero), (3, 1, 0));
        assert!(!c.passes());
    }

    #[test]
    fn caps_with_slack() {
        assert_eq!(side_cap(4, &rat(0, 1)), 2);
        assert_eq!(side_cap(5, &rat(0, 1)), 2);
        assert_eq!(side_cap(5, &rat(1, 20)), 3);
        assert_eq!(side_cap(40, &rat(1, 20)), 22);
        assert_eq!(side_cap(41, &rat(1, 20)), 23);
    }
}
