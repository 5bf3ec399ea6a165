//! Straight-edge spanning trees with low crossing number.
//!
//! [`build_low_crossing_tree`] recursively partitions the point set, joins
//! points inside each cell by segments on which no partition factor vanishes,
//! and recurses on one representative per group. [`crossing_number`] measures
//! the result exactly or by sampling.

mod build;
mod crossing;

pub use build::{build_low_crossing_tree, build_low_crossing_tree_with, LevelLog, LevelRecord, TreeBuild, TreeConfig};
pub use crossing::{crossing_number, crossings_of, CrossingMode, CrossingReport, Hyperplane};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use petgraph::unionfind::UnionFind;
use rand::Rng;

use crate::algebra::{binomial, int, monomial_count, rat, IntMultiPoly, MultiPoly, Rational, SturmChain};
use crate::error::{Error, Result};
use crate::geometry::{IntPoints, Point};
use crate::hamsandwich::lift_with_constant;
use crate::linalg::det;
use crate::rng;

/// A straight-edge graph on an indexed point list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoTree {
    pub points: Vec<Point>,
    pub edges: Vec<(usize, usize)>,
}

impl GeoTree {
    pub fn new(points: Vec<Point>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let t = GeoTree { points, edges };
        t.validate()?;
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Point::dim)
    }

    /// Checks that the edges form a spanning tree: `n - 1` edges, no loops,
    /// no repeated edges, no cycles.
    pub fn validate(&self) -> Result<()> {
        let n = self.points.len();
        if n == 0 {
            return Err(Error::invalid("tree needs at least one point"));
        }
        let d = self.points[0].dim();
        for p in &self.points {
            p.check_dim(d)?;
        }
        if self.edges.len() != n - 1 {
            return Err(Error::invalid(format!(
                "{} edges on {n} points, expected {}",
                self.edges.len(),
                n - 1
            )));
        }
        let mut uf = UnionFind::<usize>::new(n);
        for &(u, v) in &self.edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!("edge ({u}, {v}) out of range")));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at {u}")));
            }
            // a repeated edge closes a cycle as well
            if !uf.union(u, v) {
                return Err(Error::invalid(format!("edge ({u}, {v}) closes a cycle")));
            }
        }
        Ok(())
    }
}

/// Warren's bound `6 (2D)^d` on the number of components of the complement
/// of a degree-`D` zero set, and Harnack's bound `1 + binom(D - 1, 2)` on the
/// components of a plane curve (only for `d = 2`).
pub fn bound_constants(d: usize, degree: u32) -> Result<(BigInt, Option<BigInt>)> {
    if d == 0 || degree == 0 {
        return Err(Error::invalid("dimension and degree must be positive"));
    }
    let warren = BigInt::from(6) * BigInt::from(2 * degree).pow(d as u32);
    let harnack = (d == 2).then(|| BigInt::one() + binomial(degree as u64 - 1, 2));
    Ok((warren, harnack))
}

/// Determinant of the matrix with rows `(1, Phi(p_i))`, `Phi` the Veronese
/// lift of degree `D`. It vanishes exactly when the points lie on a common
/// zero set of a nonzero polynomial of degree at most `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalTest {
    pub determinant: Rational,
}

impl ExceptionalTest {
    pub fn is_exceptional(&self) -> bool {
        self.determinant.is_zero()
    }
}

pub fn exceptional_tuple_test(points: &[Point], degree: u32) -> Result<ExceptionalTest> {
    let d = points.first().map_or(0, Point::dim);
    if d == 0 {
        return Err(Error::invalid("empty tuple"));
    }
    for p in points {
        p.check_dim(d)?;
    }
    let k = monomial_count(d, degree);
    if points.len() != k + 1 {
        return Err(Error::invalid(format!(
            "degree {degree} in dimension {d} needs {} points, got {}",
            k + 1,
            points.len()
        )));
    }
    let rows: Vec<Vec<Rational>> = points.iter().map(|p| lift_with_constant(p, degree)).collect();
    Ok(ExceptionalTest { determinant: det(&rows) })
}

const PERTURB_STEPS: i64 = 1 << 20;

/// Half the smallest nonzero gap between coordinate values on any axis,
/// capped at `1/1024`.
pub fn default_delta(points: &[Point]) -> Rational {
    let cap = rat(1, 1024);
    let d = points.first().map_or(0, Point::dim);
    let mut best: Option<Rational> = None;
    for axis in 0..d {
        let mut vals: Vec<&Rational> = points.iter().map(|p| &p.coords()[axis]).collect();
        vals.sort();
        vals.dedup();
        for w in vals.windows(2) {
            let gap = w[1] - w[0];
            if best.as_ref().is_none_or(|b| gap < *b) {
                best = Some(gap);
            }
        }
    }
    match best {
        Some(g) => (g / int(2)).min(cap),
        None => cap,
    }
}

/// Shifts every coordinate by an independent multiple of `delta / 2^20`
/// strictly inside `(-delta, delta)`; points that collide are redrawn until
/// all outputs are distinct.
pub fn perturb_points(points: &[Point], delta: &Rational, seed: u64) -> Result<Vec<Point>> {
    if !delta.is_positive() {
        return Err(Error::invalid("perturbation size must be positive"));
    }
    let step = delta / int(PERTURB_STEPS);
    let shift = |p: &Point, g: &mut rng::Rng| -> Point {
        Point::new(
            p.coords()
                .iter()
                .map(|x| x + &step * int(g.gen_range(1 - PERTURB_STEPS..PERTURB_STEPS)))
                .collect(),
        )
    };
    let mut g = rng::stream(seed, "perturb", 0);
    let mut out: Vec<Point> = points.iter().map(|p| shift(p, &mut g)).collect();
    let mut redraw = rng::stream(seed, "perturb-redraw", 0);
    loop {
        let mut order: Vec<usize> = (0..out.len()).collect();
        order.sort_by(|&a, &b| out[a].cmp(&out[b]).then(a.cmp(&b)));
        let clashes: Vec<usize> = order
            .windows(2)
            .filter(|w| out[w[0]] == out[w[1]])
            .map(|w| w[0].max(w[1]))
            .collect();
        if clashes.is_empty() {
            return Ok(out);
        }
        for i in clashes {
            out[i] = shift(&points[i], &mut redraw);
        }
    }
}

/// Whether some factor vanishes somewhere on the closed segment `[p, q]`.
/// A factor that vanishes on the whole segment counts.
pub fn segment_crosses_zero(factors: &[MultiPoly], p: &Point, q: &Point) -> Result<bool> {
    let ints: Vec<IntMultiPoly> = factors.iter().map(IntMultiPoly::from_rational).collect();
    segment_crosses_zero_int(&ints, p, q)
}

pub(crate) fn segment_crosses_zero_int(factors: &[IntMultiPoly], p: &Point, q: &Point) -> Result<bool> {
    if p == q {
        return Err(Error::DegenerateSegment);
    }
    let ip = IntPoints::new(&[p.clone(), q.clone()]);
    let start = &ip.nums[0];
    let dir: Vec<BigInt> = ip.nums[1].iter().zip(start).map(|(b, a)| b - a).collect();
    for f in factors {
        if f.is_zero() {
            return Ok(true);
        }
        let g = f.restrict(start, &dir, &ip.den);
        if g.is_zero() {
            return Ok(true);
        }
        if g.sign_at_int(&BigInt::zero()) == 0 || g.sign_at_int(&BigInt::one()) == 0 {
            return Ok(true);
        }
        if g.unit_interval_variations() == 0 {
            continue;
        }
        let chain = SturmChain::new(&g);
        if chain.count_in_interval(&Rational::zero(), &Rational::one(), true) > 0 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The `side x side` integer grid in dimension `d`, in lexicographic order.
pub fn grid_points(side: usize, d: usize) -> Vec<Point> {
    let total = side.pow(d as u32);
    (0..total)
        .map(|mut i| {
            let mut c = vec![0i64; d];
            for k in (0..d).rev() {
                c[k] = (i % side) as i64;
                i /= side;
            }
            Point::from_ints(&c)
        })
        .collect()
}

/// `n` points with independent uniform integer coordinates in `[0, 2^bits)`.
pub fn random_points(n: usize, d: usize, bits: u32, seed: u64) -> Vec<Point> {
    let mut g = rng::stream(seed, "random-points", 0);
    let hi = 1i64 << bits;
    (0..n)
        .map(|_| {
            let c: Vec<i64> = (0..d).map(|_| g.gen_range(0..hi)).collect();
            Point::from_ints(&c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MultiPoly;

    fn pts(c: &[(i64, i64)]) -> Vec<Point> {
        c.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect()
    }

    #[test]
    fn bound_examples() {
        assert_eq!(bound_constants(2, 4).unwrap().0, BigInt::from(384));
        assert_eq!(bound_constants(2, 3).unwrap().1, Some(BigInt::from(2)));
        assert_eq!(bound_constants(3, 2).unwrap(), (BigInt::from(384), None));
        assert!(bound_constants(2, 0).is_err());
    }

    #[test]
    fn exceptional_examples() {
        let collinear = pts(&[(0, 0), (1, 1), (3, 3)]);
        assert!(exceptional_tuple_test(&collinear, 1).unwrap().is_exceptional());
        let corner = pts(&[(0, 0), (1, 0), (0, 1)]);
        assert_eq!(exceptional_tuple_test(&corner, 1).unwrap().determinant.abs(), int(1));
        let circle: Vec<Point> = [(5, 0), (0, 5), (-5, 0), (0, -5), (3, 4), (-4, 3)]
            .iter()
            .map(|&(x, y)| Point::from_fracs(&[(x, 5), (y, 5)]))
            .collect();
        assert!(exceptional_tuple_test(&circle, 2).unwrap().is_exceptional());
        assert!(exceptional_tuple_test(&corner[..2], 1).is_err());
    }

    #[test]
    fn exceptional_sign_flips_under_swap() {
        let a = pts(&[(0, 0), (2, 1), (5, 7)]);
        let b = pts(&[(2, 1), (0, 0), (5, 7)]);
        let da = exceptional_tuple_test(&a, 1).unwrap().determinant;
        let db = exceptional_tuple_test(&b, 1).unwrap().determinant;
        assert!(!da.is_zero());
        assert_eq!(da, -db);
    }

    #[test]
    fn segment_examples() {
        let circle = MultiPoly::parse_fixture(2, "2 0: 1\n0 2: 1\n0 0: -1").unwrap();
        let o = Point::from_ints(&[0, 0]);
        assert!(segment_crosses_zero(std::slice::from_ref(&circle), &o, &Point::from_ints(&[2, 0])).unwrap());
        assert!(!segment_crosses_zero(&[circle], &o, &Point::from_fracs(&[(1, 2), (0, 1)])).unwrap());
        let axes = [
            MultiPoly::parse_fixture(2, "1 0: 1").unwrap(),
            MultiPoly::parse_fixture(2, "0 1: 1").unwrap(),
        ];
        assert!(!segment_crosses_zero(&axes, &Point::from_ints(&[1, 1]), &Point::from_ints(&[2, 3])).unwrap());
        // touching the zero set at an endpoint or lying in it both count
        assert!(segment_crosses_zero(&axes, &Point::from_ints(&[0, 1]), &Point::from_ints(&[2, 3])).unwrap());
        assert!(segment_crosses_zero(&axes, &Point::from_ints(&[0, 1]), &Point::from_ints(&[0, 3])).unwrap());
        assert!(segment_crosses_zero(&axes, &o, &o).is_err());
    }

    #[test]
    fn perturbation_examples() {
        let p = pts(&[(0, 0), (3, 1), (3, 1), (1, 2)]);
        let delta = default_delta(&p);
        assert_eq!(delta, rat(1, 1024));
        let a = perturb_points(&p, &delta, 5).unwrap();
        let b = perturb_points(&p, &delta, 5).unwrap();
        assert_eq!(a, b);
        for i in 0..a.len() {
            for j in 0..i {
                assert_ne!(a[i], a[j]);
            }
            for (x, y) in a[i].coords().iter().zip(p[i].coords()) {
                assert!((x - y).abs() < delta);
            }
        }
        assert!(perturb_points(&p, &int(0), 5).is_err());
        let coarse = Point::from_fracs(&[(1, 4), (0, 1)]);
        assert_eq!(default_delta(&[Point::from_ints(&[0, 0]), coarse]), rat(1, 1024));
        let fine = Point::from_fracs(&[(1, 4096), (0, 1)]);
        assert_eq!(default_delta(&[Point::from_ints(&[0, 0]), fine]), rat(1, 8192));
    }

    #[test]
    fn grids() {
        let g = grid_points(3, 2);
        assert_eq!(g.len(), 9);
        assert_eq!(g[5], Point::from_ints(&[1, 2]));
        assert_eq!(grid_points(2, 3).len(), 8);
        let r = random_points(10, 3, 8, 1);
        assert_eq!(r, random_points(10, 3, 8, 1));
        assert!(r.iter().all(|p| p.dim() == 3));
    }

    #[test]
    fn validation() {
        let p = pts(&[(0, 0), (1, 0), (2, 0)]);
        assert!(GeoTree::new(p.clone(), vec![(0, 1), (1, 2)]).is_ok());
        assert!(GeoTree::new(p.clone(), vec![(0, 1)]).is_err());
        assert!(GeoTree::new(p.clone(), vec![(0, 1), (1, 0)]).is_err());
        assert!(GeoTree::new(p.clone(), vec![(0, 0), (1, 2)]).is_err());
        assert!(GeoTree::new(p, vec![(0, 1), (1, 3)]).is_err());
    }
}
