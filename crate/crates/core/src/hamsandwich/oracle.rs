//! Exhaustive bisector search for tiny instances.

use num_traits::{Signed, Zero};

use super::certificate::verify_bisection;
use super::lift_with_constant;
use crate::algebra::{monomial_count, MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg;

pub const ORACLE_MAX_POINTS: usize = 14;
pub const ORACLE_MAX_WIDTH: usize = 4;

/// Searches hyperplanes in lifted space through `k` lifted points, each
/// tilted by every sign pattern on those points, for one that bisects all
/// sets at zero slack. Returns `Ok(None)` when the enumeration is exhausted.
pub fn exact_bisector_oracle(sets: &[Vec<Point>], degree: u32) -> Result<Option<MultiPoly>> {
    let points: Vec<&Point> = sets.iter().flatten().collect();
    let Some(first) = points.first() else {
        return Err(Error::invalid("no points"));
    };
    let d = first.dim();
    for p in &points {
        p.check_dim(d)?;
    }
    let k = monomial_count(d, degree);
    if points.len() > ORACLE_MAX_POINTS || k > ORACLE_MAX_WIDTH || degree == 0 {
        return Err(Error::OracleLimit(format!(
            "{} points with {k} lifted coordinates exceeds {ORACLE_MAX_POINTS} points or {ORACLE_MAX_WIDTH} coordinates",
            points.len()
        )));
    }
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| lift_with_constant(p, degree)).collect();
    let zero = Rational::zero();
    let size = k.min(rows.len());
    for subset in combinations(rows.len(), size) {
        let sub: Vec<Vec<Rational>> = subset.iter().map(|&i| rows[i].clone()).collect();
        for h in linalg::nullspace(&sub) {
            let hv: Vec<Rational> = rows.iter().map(|r| dot(r, &h)).collect();
            let min_h = hv
                .iter()
                .filter(|v| !v.is_zero())
                .map(|v| v.abs())
                .min()
                .unwrap_or_else(|| Rational::from_integer(1.into()));
            for pattern in sign_patterns(size) {
                let rhs: Vec<Rational> = pattern.iter().map(|&s| Rational::from_integer(s.into())).collect();
                let Some(g) = linalg::solve(&sub, &rhs) else {
                    continue;
                };
                let max_g = rows.iter().map(|r| dot(r, &g).abs()).max().unwrap_or(zero.clone());
                let eta = &min_h / (max_g * Rational::from_integer(2.into()) + Rational::from_integer(1.into()));
                let coeffs: Vec<Rational> = h.iter().zip(&g).map(|(a, b)| a + &eta * b).collect();
                if coeffs.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let f = MultiPoly::from_coeff_vector(d, degree, &coeffs);
                if verify_bisection(&f, sets, &zero).passes() {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(None)
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

fn sign_patterns(k: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                [0i64, 1, -1].into_iter().map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect()
    }

    #[test]
    fn combinations_count() {
        assert_eq!(combinations(5, 2).len(), 10);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(2, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn collinear_triple() {
        let sets = vec![pts(&[(0, 0), (1, 0), (2, 0)])];
        let f = exact_bisector_oracle(&sets, 1).unwrap().unwrap();
        assert!(verify_bisection(&f, &sets, &rat(0, 1)).passes());
    }

    #[test]
    fn pair() {
        let sets = vec![pts(&[(0, 0), (1, 1)])];
        let f = exact_bisector_oracle(&sets, 1).unwrap().unwrap();
        assert!(verify_bisection(&f, &sets, &rat(0, 1)).passes());
    }

    #[test]
    fn limits() {
        let big = vec![pts(&(0..15).map(|i| (i, i * i)).collect::<Vec<_>>())];
        assert!(matches!(exact_bisector_oracle(&big, 1), Err(Error::OracleLimit(_))));
        let small = vec![pts(&[(0, 0)])];
        assert!(matches!(exact_bisector_oracle(&small, 3), Err(Error::OracleLimit(_))));
    }
}
