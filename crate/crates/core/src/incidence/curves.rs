//! Points and algebraic curves.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{binomial, int, MultiPoly, Rational};
use crate::audit::AuditReport;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::rng;

/// Distinct plane curves of degree at most `b`, any `k` points of which lie
/// on at most `c` curves of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSet {
    curves: Vec<MultiPoly>,
    pub k: usize,
    pub c: usize,
    pub b: u32,
}

impl CurveSet {
    /// Validates degrees and drops curves equal to an earlier one up to a
    /// constant factor. Curves are stored scaled so the leading coefficient
    /// (largest monomial) is one.
    pub fn new(curves: impl IntoIterator<Item = MultiPoly>, k: usize, c: usize, b: u32) -> Result<Self> {
        if k == 0 || c == 0 || b == 0 {
            return Err(Error::invalid("curve family parameters must be positive"));
        }
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for f in curves {
            if f.num_vars() != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    got: f.num_vars(),
                });
            }
            if f.is_zero() {
                return Err(Error::ZeroPolynomial);
            }
            if f.degree() > b {
                return Err(Error::invalid(format!("curve of degree {} exceeds {b}", f.degree())));
            }
            let f = normalize(&f);
            if seen.insert(f.to_fixture()) {
                out.push(f);
            }
        }
        Ok(CurveSet { curves: out, k, c, b })
    }

    pub fn curves(&self) -> &[MultiPoly] {
        &self.curves
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }
}

fn normalize(f: &MultiPoly) -> MultiPoly {
    let lead = f.terms().last().map(|(_, c)| c.clone()).expect("nonzero");
    f.scale(&(Rational::one() / lead))
}

pub fn count_incidences_curves(points: &[Point], curves: &CurveSet) -> usize {
    let coords: Vec<(Vec<BigInt>, BigInt)> = points.iter().map(Point::to_integer_coords).collect();
    curves
        .curves
        .par_iter()
        .map(|f| {
            let fi = f.to_int();
            coords.iter().filter(|(n, d)| fi.sign_at(n, d) == 0).count()
        })
        .sum()
}

/// Checks `I <= (k-1) n + C m binom(m-1, k-1)` and `I <= m + b^2 n (n-1)`
/// for `m` points and `n` curves, and notes the target bound and the
/// partition parameter the incidence theorem would use.
pub fn audit_curve_bounds(points: &[Point], curves: &CurveSet) -> AuditReport {
    let (m, n) = (points.len(), curves.len());
    let (k, c, b) = (curves.k, curves.c, curves.b);
    let mut report = AuditReport::new();
    let i = count_incidences_curves(points, curves);
    let mb = BigInt::from(m);
    let nb = BigInt::from(n);
    let bound_a = BigInt::from(k - 1) * &nb + BigInt::from(c) * &mb * binomial(m.saturating_sub(1) as u64, (k - 1) as u64);
    report.check_int("points_bound", i, bound_a);
    let bound_b = &mb + BigInt::from(b) * BigInt::from(b) * &nb * BigInt::from(n.saturating_sub(1));
    report.check_int("pairs_bound", i, bound_b);
    if m > 0 && n > 0 {
        let (mf, nf, kf) = (m as f64, n as f64, k as f64);
        let e = 2.0 * kf - 1.0;
        let target = mf.powf(kf / e) * nf.powf((2.0 * kf - 2.0) / e) + mf + nf;
        let r = mf.powf(2.0 * kf / e) / nf.powf(2.0 / e);
        report.note(format!(
            "incidences={i} target~{target:.6} ratio~{:.6} r~{r:.6}",
            i as f64 / target
        ));
    } else {
        report.note(format!("incidences={i}"));
    }
    report
}

/// The `g x g` grid `{0..g-1}^2` and every distinct circle through at least
/// three of its points with squared radius at most `g^2`.
pub fn generate_circle_instance(g: usize) -> Result<(Vec<Point>, CurveSet)> {
    if g < 2 {
        return Err(Error::invalid("grid side must be at least 2"));
    }
    let gi = g as i64;
    let pts: Vec<(i64, i64)> = (0..gi).flat_map(|x| (0..gi).map(move |y| (x, y))).collect();
    let limit = int(gi * gi);
    let mut circles: BTreeSet<(Rational, Rational, Rational)> = BTreeSet::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            for c in b + 1..pts.len() {
                if let Some(circle) = circumcircle(pts[a], pts[b], pts[c]) {
                    if circle.2 <= limit {
                        circles.insert(circle);
                    }
                }
            }
        }
    }
    let curves = circles.into_iter().map(|(ux, uy, r2)| circle_poly(&ux, &uy, &r2));
    let points = pts.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect();
    Ok((points, CurveSet::new(curves, 3, 1, 2)?))
}

/// `(x - ux)^2 + (y - uy)^2 - r2`.
pub(crate) fn circle_poly(ux: &Rational, uy: &Rational, r2: &Rational) -> MultiPoly {
    let two = int(2);
    MultiPoly::from_terms(
        2,
        vec![
            (vec![2, 0], Rational::one()),
            (vec![0, 2], Rational::one()),
            (vec![1, 0], -(&two * ux)),
            (vec![0, 1], -(&two * uy)),
            (vec![0, 0], ux * ux + uy * uy - r2),
        ],
    )
    .expect("two variables")
}

/// Centre and squared radius of the circle through three points, if they
/// are not collinear.
fn circumcircle(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Option<(Rational, Rational, Rational)> {
    let (ax, ay) = (a.0 as i128, a.1 as i128);
    let (bx, by) = (b.0 as i128, b.1 as i128);
    let (cx, cy) = (c.0 as i128, c.1 as i128);
    let d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == 0 {
        return None;
    }
    let (a2, b2, c2) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
    let ux = a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by);
    let uy = a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax);
    let den = BigInt::from(d);
    let ux = Rational::new(BigInt::from(ux), den.clone());
    let uy = Rational::new(BigInt::from(uy), den);
    let dx = &ux - int(a.0);
    let dy = &uy - int(a.1);
    let r2 = &dx * &dx + &dy * &dy;
    Some((ux, uy, r2))
}

/// `count` distinct nondegenerate conics, each through five random points
/// of the `g x g` grid. Two distinct irreducible conics share at most four
/// points, so the family has `k = 5`, `C = 1`, `b = 2`.
pub fn generate_conic_instance(g: usize, count: usize, seed: u64) -> Result<(Vec<Point>, CurveSet)> {
    if g < 3 {
        return Err(Error::invalid("grid side must be at least 3"));
    }
    let gi = g as i64;
    let points: Vec<Point> = (0..gi)
        .flat_map(|x| (0..gi).map(move |y| Point::from_ints(&[x, y])))
        .collect();
    let mut rng = rng::stream(seed, "conics", 0);
    let mut found: BTreeMap<String, MultiPoly> = BTreeMap::new();
    let mut order = Vec::new();
    let mut attempts = 0;
    while order.len() < count {
        attempts += 1;
        if attempts > 1000 * (count + 1) {
            return Err(Error::invalid("could not draw enough conics"));
        }
        let five: Vec<&Point> = (0..5).map(|_| &points[rng.gen_range(0..points.len())]).collect();
        let Some(f) = conic_through(&five) else {
            continue;
        };
        let f = normalize(&f);
        let key = f.to_fixture();
        if !found.contains_key(&key) {
            found.insert(key.clone(), f);
            order.push(key);
        }
    }
    let curves = order.into_iter().map(|k| found.remove(&k).expect("present"));
    Ok((points, CurveSet::new(curves, 5, 1, 2)?))
}

/// The unique nondegenerate conic through five points, if there is one.
fn conic_through(pts: &[&Point]) -> Option<MultiPoly> {
    let rows: Vec<Vec<Rational>> = pts
        .iter()
        .map(|p| {
            let (x, y) = (&p.coords()[0], &p.coords()[1]);
            vec![Rational::one(), x.clone(), y.clone(), x * x, x * y, y * y]
        })
        .collect();
    let null = crate::linalg::nullspace(&rows);
    if null.len() != 1 {
        return None;
    }
    let f = MultiPoly::from_coeff_vector(2, 2, &null[0]);
    // nondegenerate iff det [[A, B/2, D/2], [B/2, C, E/2], [D/2, E/2, F]] != 0
    let v = &null[0];
    let (f0, d, e, a, b, c) = (&v[0], &v[1], &v[2], &v[3], &v[4], &v[5]);
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let m = vec![
        vec![a.clone(), b * &half, d * &half],
        vec![b * &half, c.clone(), e * &half],
        vec![d * &half, e * &half, f0.clone()],
    ];
    if crate::linalg::det(&m).is_zero() {
        return None;
    }
    Some(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect()
    }

    fn unit_circle() -> MultiPoly {
        circle_poly(&int(0), &int(0), &int(1))
    }

    #[test]
    fn count_examples() {
        let g = CurveSet::new([unit_circle()], 3, 1, 2).unwrap();
        assert_eq!(count_incidences_curves(&pts(&[(1, 0), (-1, 0), (0, 1)]), &g), 3);
        let diag = MultiPoly::from_terms(2, vec![(vec![1, 0], int(1)), (vec![0, 1], int(-1))]).unwrap();
        let g = CurveSet::new([unit_circle(), diag], 3, 1, 2).unwrap();
        assert_eq!(count_incidences_curves(&pts(&[(0, 0)]), &g), 1);
    }

    #[test]
    fn dedup_up_to_scaling() {
        let g = CurveSet::new([unit_circle(), unit_circle().scale(&int(-3))], 3, 1, 2).unwrap();
        assert_eq!(g.len(), 1);
        let cubic = MultiPoly::from_terms(2, vec![(vec![3, 0], int(1))]).unwrap();
        assert!(CurveSet::new([cubic], 3, 1, 2).is_err());
    }

    #[test]
    fn audit_example() {
        // four points, two circles each through three of them
        // the unit circle through three of them, another through (1,0),
        // (-1,0) and (0,3)
        let p = pts(&[(1, 0), (-1, 0), (0, 1), (0, 3)]);
        let c1 = unit_circle();
        let (ux, uy, r2) = circumcircle((1, 0), (-1, 0), (0, 3)).unwrap();
        let c2 = circle_poly(&ux, &uy, &r2);
        let g = CurveSet::new([c1, c2], 3, 1, 2).unwrap();
        assert_eq!(count_incidences_curves(&p, &g), 6);
        let report = audit_curve_bounds(&p, &g);
        assert!(report.all_pass());
        assert_eq!(report.entry("points_bound").unwrap().bound, int(16));
    }

    #[test]
    fn empty_family() {
        let g = CurveSet::new(Vec::<MultiPoly>::new(), 3, 1, 2).unwrap();
        let report = audit_curve_bounds(&pts(&[(0, 0)]), &g);
        assert!(report.all_pass());
        assert_eq!(report.entry("points_bound").unwrap().observed, int(0));
    }

    #[test]
    fn circle_instances() {
        let (p, g) = generate_circle_instance(2).unwrap();
        assert_eq!(p.len(), 4);
        assert!(!g.is_empty());
        for f in g.curves() {
            let on = p.iter().filter(|q| f.sign_at(q.coords()).unwrap() == 0).count();
            assert!(on >= 3);
        }
        let (p, g) = generate_circle_instance(3).unwrap();
        // independent recount through centre and radius
        let mut brute = 0;
        for f in g.curves() {
            let ux = -f.coeff(&crate::algebra::Exponents::new(vec![1, 0])) / int(2);
            let uy = -f.coeff(&crate::algebra::Exponents::new(vec![0, 1])) / int(2);
            let r2 = &ux * &ux + &uy * &uy - f.coeff(&crate::algebra::Exponents::zero(2));
            for q in &p {
                let dx = &q.coords()[0] - &ux;
                let dy = &q.coords()[1] - &uy;
                if &dx * &dx + &dy * &dy == r2 {
                    brute += 1;
                }
            }
        }
        assert_eq!(count_incidences_curves(&p, &g), brute);
        assert!(audit_curve_bounds(&p, &g).all_pass());
    }

    #[test]
    fn conic_instances() {
        let (p, g) = generate_conic_instance(5, 10, 1).unwrap();
        assert_eq!(g.len(), 10);
        assert_eq!((g.k, g.c, g.b), (5, 1, 2));
        for f in g.curves() {
            assert!(f.degree() == 2);
        }
        assert!(audit_curve_bounds(&p, &g).all_pass());
    }
}
