//! Partitioning polynomials built as products of bisecting polynomials.
//!
//! Round `j` bisects every set of the current family that still exceeds
//! `ceil(n / r)` points with one polynomial `f_j`, then splits each set by the
//! sign of `f_j`. After `t` rounds the sign vector `(sign f_1, ..., sign f_t)`
//! separates the point set into classes of size about `n / 2^t`; these
//! classes are the cells. Points on some zero set get a zero entry and are
//! boundary points.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::algebra::{decompose_line, monomial_count, signs_at_points, IntMultiPoly, Line, MultiPoly, Rational};
use crate::audit::AuditReport;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::hamsandwich::{find_bisecting_polynomial_with, BisectionCertificate, SearchConfig};
use crate::rng;

#[derive(Clone, Debug)]
pub struct PartitionConfig {
    pub search: SearchConfig,
    /// Degree increments allowed per round after a failed search.
    pub max_escalations: u32,
    /// Rounds allowed beyond the planned count while some cell is too big.
    pub max_extra_rounds: usize,
}

impl Default for PartitionConfig {
    fn default() -> Self {
        PartitionConfig {
            search: SearchConfig {
                restarts: 16,
                ..SearchConfig::default()
            },
            max_escalations: 3,
            max_extra_rounds: 8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PartitionResult {
    pub dim: usize,
    pub r: Rational,
    pub eps: Rational,
    pub factors: Vec<MultiPoly>,
    /// Degree each round's search started from.
    pub nominal_degrees: Vec<u32>,
    pub certificates: Vec<BisectionCertificate>,
    /// Number of sets bisected in each round.
    pub round_sets: Vec<usize>,
    pub planned_rounds: usize,
    pub total_degree: u32,
    pub point_signs: Vec<Vec<i8>>,
    pub cells: BTreeMap<Vec<i8>, Vec<usize>>,
    pub boundary_points: Vec<usize>,
    pub log: Vec<String>,
}

impl PartitionResult {
    pub fn rounds(&self) -> usize {
        self.factors.len()
    }

    pub fn num_points(&self) -> usize {
        self.point_signs.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.factors.iter().map(|f| f.degree()).collect()
    }

    pub fn max_cell_size(&self) -> usize {
        self.cells.values().map(Vec::len).max().unwrap_or(0)
    }

    /// `ceil(n / r)`.
    pub fn cell_bound(&self) -> usize {
        cell_bound(self.num_points(), &self.r)
    }

    pub fn int_factors(&self) -> Vec<IntMultiPoly> {
        self.factors.iter().map(MultiPoly::to_int).collect()
    }

    /// The cell containing point `i`, if it is not a boundary point.
    pub fn cell_of(&self, i: usize) -> Option<&[usize]> {
        self.cells.get(&self.point_signs[i]).map(Vec::as_slice)
    }
}

fn cell_bound(n: usize, r: &Rational) -> usize {
    (Rational::from_integer(BigInt::from(n)) / r)
        .ceil()
        .to_integer()
        .to_usize()
        .unwrap_or(usize::MAX)
}

/// Smallest `t >= 1` with `r (1/2 + eps)^t <= 1`.
pub fn planned_rounds(r: &Rational, eps: &Rational) -> Result<usize> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if *eps < Rational::zero() || *eps >= half {
        return Err(Error::invalid("slack must lie in [0, 1/2)"));
    }
    let q = half + eps;
    let mut t = 1;
    let mut x = r * &q;
    while x > Rational::one() {
        x *= &q;
        t += 1;
    }
    Ok(t)
}

/// Smallest degree whose nonconstant monomial count is at least `sets`.
pub fn minimal_degree(dim: usize, sets: usize) -> u32 {
    let mut d = 1;
    while monomial_count(dim, d) < sets {
        d += 1;
    }
    d
}

pub fn sign_vector(point: &Point, factors: &[MultiPoly]) -> Result<Vec<i8>> {
    factors.iter().map(|f| f.sign_at(point.coords())).collect()
}

pub fn build_partition(points: &[Point], r: &Rational, eps: &Rational, seed: u64) -> Result<PartitionResult> {
    build_partition_with(points, r, eps, seed, &PartitionConfig::default())
}

pub fn build_partition_with(
    points: &[Point],
    r: &Rational,
    eps: &Rational,
    seed: u64,
    config: &PartitionConfig,
) -> Result<PartitionResult> {
    let n = points.len();
    if *r <= Rational::one() {
        return Err(Error::invalid("r must exceed 1"));
    }
    if *r > Rational::from_integer(BigInt::from(n)) {
        return Err(Error::invalid("r must not exceed the number of points"));
    }
    let dim = points[0].dim();
    for p in points {
        p.check_dim(dim)?;
    }
    let planned = planned_rounds(r, eps)?;
    let bound = cell_bound(n, r);

    let mut sets: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut result = PartitionResult {
        dim,
        r: r.clone(),
        eps: eps.clone(),
        factors: Vec::new(),
        nominal_degrees: Vec::new(),
        certificates: Vec::new(),
        round_sets: Vec::new(),
        planned_rounds: planned,
        total_degree: 0,
        point_signs: vec![Vec::new(); n],
        cells: BTreeMap::new(),
        boundary_points: Vec::new(),
        log: Vec::new(),
    };

    let mut round = 0;
    loop {
        // sets already within the bound need no further splitting
        sets.retain(|s| s.len() > bound);
        if sets.is_empty() {
            break;
        }
        if round >= planned + config.max_extra_rounds {
            let max = sets.iter().map(Vec::len).max().unwrap_or(0);
            result.log.push(format!(
                "stopped after {round} rounds with a cell of {max} points above the bound {bound}"
            ));
            break;
        }
        if round >= planned {
            result.log.push(format!(
                "round {}: extra round for {} cells above {bound} points",
                round + 1,
                sets.len()
            ));
        }
        round += 1;
        let family: Vec<Vec<Point>> = sets
            .iter()
            .map(|s| s.iter().map(|&i| points[i].clone()).collect())
            .collect();
        let nominal = minimal_degree(dim, family.len());
        let round_seed = rng::derive_seed(seed, "partition-round", round as u64);
        let mut degree = nominal;
        let bisector = loop {
            match find_bisecting_polynomial_with(&family, degree, eps, round_seed, &config.search) {
                Ok(b) => break b,
                Err(Error::BisectionNotFound { .. }) if degree < nominal + config.max_escalations => {
                    result.log.push(format!(
                        "round {round}: no bisector of degree {degree} for {} sets, escalating to {}",
                        family.len(),
                        degree + 1
                    ));
                    degree += 1;
                }
                Err(e) => {
                    return Err(Error::PartitionRound {
                        round,
                        source: Box::new(e),
                    })
                }
            }
        };
        let signs = signs_at_points(&bisector.poly, points);
        for (ps, &s) in result.point_signs.iter_mut().zip(&signs) {
            ps.push(s);
        }
        let mut next = Vec::with_capacity(2 * sets.len());
        for s in &sets {
            let pos: Vec<usize> = s.iter().copied().filter(|&i| signs[i] > 0).collect();
            let neg: Vec<usize> = s.iter().copied().filter(|&i| signs[i] < 0).collect();
            next.extend([pos, neg].into_iter().filter(|v| !v.is_empty()));
        }
        result.total_degree += bisector.poly.degree();
        result.round_sets.push(family.len());
        result.nominal_degrees.push(nominal);
        result.certificates.push(bisector.certificate);
        result.factors.push(bisector.poly);
        sets = next;
    }

    for (i, s) in result.point_signs.iter().enumerate() {
        if s.contains(&0) {
            result.boundary_points.push(i);
        } else {
            result.cells.entry(s.clone()).or_default().push(i);
        }
    }
    Ok(result)
}

/// Checks the partition's size, degree, line-crossing and cell-count bounds.
pub fn audit_partition(pr: &PartitionResult, points: &[Point], r: &Rational, lines: &[Line]) -> AuditReport {
    let mut report = AuditReport::new();
    let n = points.len();
    report.check_int("max_cell_size", pr.max_cell_size(), cell_bound(n, r));
    let t = pr.rounds();
    if pr.dim == 2 {
        // total_degree <= 7 sqrt(2^t)  <=>  total_degree <= floor(sqrt(49 * 2^t))
        let bound = (BigInt::from(49) << t).sqrt();
        report.check_int("total_degree", pr.total_degree, bound);
    }
    if !lines.is_empty() {
        if pr.dim == 2 {
            let factors = pr.int_factors();
            for (i, line) in lines.iter().enumerate() {
                let (start, dir, den) = line.parametrization();
                let dec = decompose_line(&factors, &start, &dir, &den);
                report.check_int(
                    format!("line_sign_classes[{i}]"),
                    dec.nonzero_sign_vectors().len(),
                    pr.total_degree + 1,
                );
            }
        } else {
            report.note("line checks skipped: points are not planar");
        }
    }
    let warren = BigInt::from(6) * num_traits::pow(BigInt::from(2 * pr.total_degree), pr.dim);
    report.check_int("nonempty_cells", pr.cells.len(), warren);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};
    use rand::Rng;

    fn random_points(n: usize, seed: u64) -> Vec<Point> {
        let mut g = rng::stream(seed, "test-points", 0);
        (0..n)
            .map(|_| Point::from_ints(&[g.gen_range(0..10_000), g.gen_range(0..10_000)]))
            .collect()
    }

    #[test]
    fn sign_vector_examples() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let f = vec![x.clone(), y.clone()];
        assert_eq!(sign_vector(&Point::from_ints(&[2, -3]), &f).unwrap(), vec![1, -1]);
        assert_eq!(sign_vector(&Point::from_ints(&[0, 5]), &f).unwrap(), vec![0, 1]);
        let circle = &(&(&x * &x) + &(&y * &y)) - &MultiPoly::constant(2, int(1));
        assert_eq!(sign_vector(&Point::from_ints(&[1, 0]), &[circle]).unwrap(), vec![0]);
    }

    #[test]
    fn planned_round_counts() {
        assert_eq!(planned_rounds(&int(8), &int(0)).unwrap(), 3);
        assert_eq!(planned_rounds(&int(4), &int(0)).unwrap(), 2);
        assert_eq!(planned_rounds(&int(5), &int(0)).unwrap(), 3);
        // 0.55^9 < 1/128 < 0.55^8
        assert_eq!(planned_rounds(&int(128), &rat(1, 20)).unwrap(), 9);
        assert!(planned_rounds(&int(4), &rat(1, 2)).is_err());
    }

    #[test]
    fn minimal_degrees() {
        assert_eq!(minimal_degree(2, 1), 1);
        assert_eq!(minimal_degree(2, 2), 1);
        assert_eq!(minimal_degree(2, 3), 2);
        assert_eq!(minimal_degree(2, 5), 2);
        assert_eq!(minimal_degree(2, 6), 3);
        assert_eq!(minimal_degree(3, 3), 1);
        assert_eq!(minimal_degree(3, 4), 2);
    }

    #[test]
    fn corners() {
        let pts: Vec<Point> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .map(|&(x, y)| Point::from_ints(&[x, y]))
            .collect();
        let pr = build_partition(&pts, &int(4), &int(0), 5).unwrap();
        assert_eq!(pr.max_cell_size(), 1);
        let report = audit_partition(&pr, &pts, &int(4), &[]);
        assert!(report.all_pass(), "{}", report.to_csv());
        for i in 0..4 {
            assert!(pr.cell_of(i).is_some() || pr.boundary_points.contains(&i));
        }
    }

    #[test]
    fn corners_with_axis_factors_audit() {
        let pts: Vec<Point> = [(1, 1), (1, -1), (-1, 1), (-1, -1)]
            .iter()
            .map(|&(x, y)| Point::from_ints(&[x, y]))
            .collect();
        let factors = vec![MultiPoly::var(2, 0), MultiPoly::var(2, 1)];
        let point_signs: Vec<Vec<i8>> = pts.iter().map(|p| sign_vector(p, &factors).unwrap()).collect();
        let mut cells = BTreeMap::new();
        for (i, s) in point_signs.iter().enumerate() {
            cells.entry(s.clone()).or_insert_with(Vec::new).push(i);
        }
        let pr = PartitionResult {
            dim: 2,
            r: int(4),
            eps: int(0),
            factors,
            nominal_degrees: vec![1, 1],
            certificates: Vec::new(),
            round_sets: vec![1, 2],
            planned_rounds: 2,
            total_degree: 2,
            point_signs,
            cells,
            boundary_points: Vec::new(),
            log: Vec::new(),
        };
        let lines = vec![
            Line::from_ints(1, -1, 0).unwrap(),
            Line::from_ints(1, 1, -1).unwrap(),
            Line::from_ints(0, 1, -3).unwrap(),
        ];
        let report = audit_partition(&pr, &pts, &int(4), &lines);
        assert!(report.all_pass());
        let cells = report.entry("nonempty_cells").unwrap();
        assert_eq!(cells.observed, int(4));
        assert_eq!(cells.bound, int(96));
        assert_eq!(report.entry("line_sign_classes[1]").unwrap().observed, int(3));
        assert_eq!(report.entry("line_sign_classes[0]").unwrap().observed, int(2));
        assert_eq!(report.entry("total_degree").unwrap().bound, int(14));
    }

    #[test]
    fn sixty_four_points_exact_slack() {
        let pts = random_points(64, 1);
        let pr = build_partition(&pts, &int(8), &int(0), 2).unwrap();
        assert_eq!(pr.planned_rounds, 3);
        assert!(pr.max_cell_size() <= 8);
        let mut counts: BTreeMap<&Vec<i8>, usize> = BTreeMap::new();
        for (i, s) in pr.point_signs.iter().enumerate() {
            if !pr.boundary_points.contains(&i) {
                *counts.entry(s).or_default() += 1;
            }
        }
        assert!(counts.values().all(|&c| c <= 8));
        assert!(audit_partition(&pr, &pts, &int(8), &[]).all_pass());
    }

    #[test]
    fn rejects_bad_r() {
        let pts = random_points(10, 0);
        assert!(build_partition(&pts, &int(1), &rat(1, 20), 0).is_err());
        assert!(build_partition(&pts, &int(11), &rat(1, 20), 0).is_err());
    }

    #[test]
    fn deterministic() {
        let pts = random_points(100, 3);
        let a = build_partition(&pts, &int(10), &rat(1, 20), 9).unwrap();
        let b = build_partition(&pts, &int(10), &rat(1, 20), 9).unwrap();
        assert_eq!(a.factors, b.factors);
        assert_eq!(a.point_signs, b.point_signs);
    }
}
