//! Points and lines.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::{cube_root_lower, dyadic_approx};
use crate::algebra::{decompose_line, format_rational, int, Line, Rational};
use crate::audit::AuditReport;
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::partition::build_partition;
use crate::rng;

/// Distinct lines, kept in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LineSet {
    lines: Vec<Line>,
}

impl LineSet {
    /// Builds a set, dropping repeated lines.
    pub fn new(lines: impl IntoIterator<Item = Line>) -> Self {
        let mut seen = BTreeSet::new();
        let lines = lines.into_iter().filter(|l| seen.insert(l.clone())).collect();
        LineSet { lines }
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

pub fn count_incidences_lines(points: &[Point], lines: &LineSet) -> usize {
    lines
        .lines
        .par_iter()
        .map(|l| points.iter().filter(|p| l.contains(p)).count())
        .sum()
}

/// `{1..k} x {1..2k^2}` with the lines `y = a x + b`, `a in 1..=k`,
/// `b in 1..=k^2`; each line holds exactly `k` of the points.
pub fn generate_extremal_grid(k: usize) -> Result<(Vec<Point>, LineSet)> {
    if k == 0 {
        return Err(Error::invalid("grid size must be at least 1"));
    }
    let k = k as i64;
    let points = (1..=k)
        .flat_map(|x| (1..=2 * k * k).map(move |y| Point::from_ints(&[x, y])))
        .collect();
    let lines = LineSet::new((1..=k).flat_map(|a| (1..=k * k).map(move |b| Line::from_slope(int(a), int(b)))));
    Ok((points, lines))
}

/// `m` distinct points from a square integer grid of side about
/// `2 sqrt(m)`, and `n` distinct lines each through two of the points.
pub fn generate_random_line_instance(m: usize, n: usize, seed: u64) -> Result<(Vec<Point>, LineSet)> {
    if m < 2 {
        return Err(Error::invalid("need at least two points"));
    }
    let side = (2.0 * (m as f64).sqrt()).ceil() as i64 + 1;
    let mut g = rng::stream(seed, "line-instance", 0);
    let mut seen = BTreeSet::new();
    let mut points = Vec::with_capacity(m);
    while points.len() < m {
        let c = (g.gen_range(0..side), g.gen_range(0..side));
        if seen.insert(c) {
            points.push(Point::from_ints(&[c.0, c.1]));
        }
    }
    let mut lines = BTreeSet::new();
    let mut ordered = Vec::with_capacity(n);
    let mut attempts = 0usize;
    while ordered.len() < n {
        attempts += 1;
        if attempts > 100 * n + 1000 {
            return Err(Error::invalid("could not draw enough distinct lines"));
        }
        let i = g.gen_range(0..m);
        let j = g.gen_range(0..m);
        if i == j {
            continue;
        }
        let l = Line::through(&points[i], &points[j])?;
        if lines.insert(l.clone()) {
            ordered.push(l);
        }
    }
    Ok((points, LineSet { lines: ordered }))
}

/// `count` lines, each through two random rational points of the planar
/// bounding box of `points` widened by one on every side. Coordinates are
/// multiples of `1/2^16` of the box size.
pub fn random_lines_near(points: &[Point], count: usize, seed: u64) -> Result<Vec<Line>> {
    let Some(first) = points.first() else {
        return Err(Error::invalid("need at least one point"));
    };
    if first.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: first.dim(),
        });
    }
    let mut lo = first.coords().to_vec();
    let mut hi = lo.clone();
    for p in points {
        for (j, c) in p.coords().iter().enumerate() {
            if *c < lo[j] {
                lo[j] = c.clone();
            }
            if *c > hi[j] {
                hi[j] = c.clone();
            }
        }
    }
    let one = Rational::one();
    let lo: Vec<Rational> = lo.iter().map(|c| c - &one).collect();
    let span: Vec<Rational> = hi.iter().zip(&lo).map(|(h, l)| h + &one - l).collect();
    let steps = 1i64 << 16;
    let mut g = rng::stream(seed, "random-lines", 0);
    let draw = |g: &mut rng::Rng| {
        Point::new(
            (0..2)
                .map(|j| &lo[j] + &span[j] * Rational::new(g.gen_range(0..=steps).into(), steps.into()))
                .collect(),
        )
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let (p, q) = (draw(&mut g), draw(&mut g));
        if p != q {
            out.push(Line::through(&p, &q)?);
        }
    }
    Ok(out)
}

/// `I / (m^(2/3) n^(2/3) + m + n)` with the cube root rounded down, so the
/// ratio can only be overestimated.
pub fn st_bound_ratio(points: &[Point], lines: &LineSet) -> Result<Rational> {
    let (m, n) = (points.len(), lines.len());
    if m == 0 || n == 0 {
        return Err(Error::invalid("need at least one point and one line"));
    }
    let i = count_incidences_lines(points, lines);
    let mn = BigInt::from(m) * BigInt::from(n);
    let denom = cube_root_lower(&(&mn * &mn)) + int(m as i64) + int(n as i64);
    Ok(int(i as i64) / denom)
}

/// Incidence count after the duality `(p, q) -> y = p x - q`,
/// `y = a x + b -> (a, -b)`. Instances with vertical lines are first sheared
/// by `(x, y) -> (x + s y, y)`; the shear `s` is returned.
pub fn dual_incidence_count(points: &[Point], lines: &LineSet, seed: u64) -> Result<(usize, Rational)> {
    let mut shear = Rational::zero();
    if lines.lines.iter().any(Line::is_vertical) {
        // a line a x + b y + c = 0 stays vertical under the shear iff b = a s
        let bad: BTreeSet<Rational> = lines
            .lines
            .iter()
            .filter(|l| !l.coeffs()[0].is_zero())
            .map(|l| l.coeffs()[1] / l.coeffs()[0])
            .collect();
        let mut g = rng::stream(seed, "dual-shear", 0);
        loop {
            let s = Rational::new(BigInt::from(g.gen_range(1..1000)), BigInt::from(g.gen_range(1..1000)));
            if !bad.contains(&s) {
                shear = s;
                break;
            }
        }
    }
    let sheared: Vec<(Rational, Rational)> = points
        .iter()
        .map(|p| {
            let (x, y) = (&p.coords()[0], &p.coords()[1]);
            (x + &shear * y, y.clone())
        })
        .collect();
    // a x + b y + c = 0 with x = x' - s y:  a x' + (b - a s) y + c = 0
    let dual_points: Vec<Point> = lines
        .lines
        .iter()
        .map(|l| {
            let [a, b, c] = l.coeffs();
            let b2 = b - a * &shear;
            // y = (-a / b2) x + (-c / b2)
            Point::new(vec![-(a / &b2), c / &b2])
        })
        .collect();
    let dual_lines = LineSet::new(
        sheared
            .iter()
            .map(|(x, y)| Line::from_slope(x.clone(), -y.clone())),
    );
    Ok((count_incidences_lines(&dual_points, &dual_lines), shear))
}

#[derive(Clone, Debug)]
pub struct StAuditConfig {
    /// Partition parameter; chosen from `m` and `n` when absent.
    pub r: Option<Rational>,
    pub eps: Rational,
    pub seed: u64,
    /// Build and audit the partition even when `m < sqrt(n)` or `m > n^2`.
    pub force_partition: bool,
}

impl Default for StAuditConfig {
    fn default() -> Self {
        StAuditConfig {
            r: None,
            eps: Rational::new(BigInt::one(), BigInt::from(20)),
            seed: 0,
            force_partition: false,
        }
    }
}

pub fn audit_szemeredi_trotter(points: &[Point], lines: &LineSet, r: Option<Rational>, seed: u64) -> Result<AuditReport> {
    audit_szemeredi_trotter_with(
        points,
        lines,
        &StAuditConfig {
            r,
            seed,
            ..StAuditConfig::default()
        },
    )
}

pub fn audit_szemeredi_trotter_with(points: &[Point], lines: &LineSet, config: &StAuditConfig) -> Result<AuditReport> {
    let (m, n) = (points.len(), lines.len());
    let mut report = AuditReport::new();
    let incidences = count_incidences_lines(points, lines);
    report.check_int("lemma_bound", incidences, BigInt::from(n) + BigInt::from(m) * BigInt::from(m));

    let mf = m as f64;
    let nf = n as f64;
    let in_range = m >= 2 && n >= 1 && nf.sqrt() <= mf && mf <= nf * nf;
    if !in_range && !config.force_partition && config.r.is_none() {
        report.note(format!("m={m} n={n} outside sqrt(n) <= m <= n^2; only the lemma bound applies"));
        return Ok(report);
    }
    if m < 2 {
        report.note("fewer than two points; no partition");
        return Ok(report);
    }
    let r = match &config.r {
        Some(r) => r.clone(),
        None => {
            let raw = if m == n {
                nf.powf(2.0 / 3.0)
            } else {
                mf.powf(4.0 / 3.0) / nf.powf(2.0 / 3.0)
            };
            dyadic_approx(raw.clamp(2.0, mf))
        }
    };
    let pr = build_partition(points, &r, &config.eps, config.seed)?;
    report.note(format!(
        "r={} rounds={} total_degree={} cells={} boundary={}",
        format_rational(&r),
        pr.rounds(),
        pr.total_degree,
        pr.cells.len(),
        pr.boundary_points.len()
    ));
    let degree = pr.total_degree as usize;
    let factors = pr.int_factors();

    struct LineInfo {
        contained: bool,
        zeros: usize,
        cells: BTreeSet<Vec<i8>>,
    }
    let infos: Vec<LineInfo> = lines
        .lines
        .par_iter()
        .map(|l| {
            let (start, dir, den) = l.parametrization();
            let dec = decompose_line(&factors, &start, &dir, &den);
            let contained = dec.contained.iter().any(|&c| c);
            let cells = if contained {
                BTreeSet::new()
            } else {
                dec.nonzero_sign_vectors()
                    .into_iter()
                    .filter(|s| pr.cells.contains_key(s))
                    .collect()
            };
            LineInfo {
                contained,
                zeros: dec.roots.len(),
                cells,
            }
        })
        .collect();

    // (b) lines meeting each cell
    let meeting: usize = infos.iter().map(|i| i.cells.len()).sum();
    report.check_int("lines_meeting_cells", meeting, (degree + 1) * n);

    // (c) sum of squared cell sizes
    let squares: usize = pr.cells.values().map(|c| c.len() * c.len()).sum();
    report.check_int("cell_square_sum", squares, pr.max_cell_size() * m);

    // (d) zeros along lines not contained in Z
    let max_zeros = infos.iter().filter(|i| !i.contained).map(|i| i.zeros).max().unwrap_or(0);
    report.check_int("line_zeros_max", max_zeros, degree);

    // the decomposition I = I(P0, L0) + I(P0, L \ L0) + sum_i I(P_i, L)
    let boundary: Vec<&Point> = pr.boundary_points.iter().map(|&i| &points[i]).collect();
    let l0: Vec<usize> = (0..n).filter(|&j| infos[j].contained).collect();
    let count = |js: &mut dyn Iterator<Item = usize>, ps: &[&Point]| -> usize {
        js.map(|j| ps.iter().filter(|p| lines.lines[j].contains(p)).count()).sum()
    };
    let i00 = count(&mut l0.iter().copied(), &boundary);
    let i01 = count(&mut (0..n).filter(|&j| !infos[j].contained), &boundary);
    report.check_int("boundary_contained", i00, l0.len() * boundary.len());
    report.check_int("boundary_crossing", i01, degree * (n - l0.len()));
    let mut cell_incidences = 0usize;
    let mut unmet = 0usize;
    for (sv, members) in &pr.cells {
        for (j, l) in lines.lines.iter().enumerate() {
            let k = members.iter().filter(|&&p| l.contains(&points[p])).count();
            cell_incidences += k;
            if k > 0 && !infos[j].cells.contains(sv) {
                unmet += 1;
            }
        }
    }
    report.check_int("incident_lines_missing_cell", unmet, 0);
    let gap = (incidences as i64 - (i00 + i01 + cell_incidences) as i64).abs();
    report.check_int("decomposition_gap", gap, 0);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, to_f64};

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect()
    }

    #[test]
    fn count_examples() {
        let axes = LineSet::new([Line::from_ints(1, 0, 0).unwrap(), Line::from_ints(0, 1, 0).unwrap()]);
        assert_eq!(count_incidences_lines(&pts(&[(0, 0)]), &axes), 2);
        let diag = LineSet::new([Line::from_ints(1, -1, 0).unwrap()]);
        assert_eq!(count_incidences_lines(&pts(&[(0, 0), (1, 1), (2, 2)]), &diag), 3);
    }

    #[test]
    fn dedup() {
        let l = LineSet::new([Line::from_ints(1, 1, 1).unwrap(), Line::from_ints(2, 2, 2).unwrap()]);
        assert_eq!(l.len(), 1);
    }

    #[test]
    fn grids() {
        for k in 1..=6 {
            let (p, l) = generate_extremal_grid(k).unwrap();
            assert_eq!(p.len(), 2 * k * k * k);
            assert_eq!(l.len(), k * k * k);
            // independent count: each line y = a x + b hits x in 1..=k with y <= 2k^2
            let mut brute = 0;
            for a in 1..=k as i64 {
                for b in 1..=(k * k) as i64 {
                    for x in 1..=k as i64 {
                        let y = a * x + b;
                        if y >= 1 && y <= 2 * (k * k) as i64 {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(brute, k.pow(4));
            assert_eq!(count_incidences_lines(&p, &l), k.pow(4));
        }
        assert!(generate_extremal_grid(0).is_err());
    }

    #[test]
    fn ratios() {
        let (p, l) = generate_extremal_grid(2).unwrap();
        let r = st_bound_ratio(&p, &l).unwrap();
        assert!((to_f64(&r) - 16.0 / (128f64.powf(2.0 / 3.0) + 24.0)).abs() < 1e-9);
        let one = LineSet::new([Line::from_ints(1, 0, 0).unwrap()]);
        assert_eq!(st_bound_ratio(&pts(&[(0, 0)]), &one).unwrap(), rat(1, 3));
        assert_eq!(st_bound_ratio(&pts(&[(1, 0)]), &one).unwrap(), rat(0, 1));
    }

    #[test]
    fn duality_preserves_counts() {
        let (p, l) = generate_extremal_grid(3).unwrap();
        assert_eq!(dual_incidence_count(&p, &l, 1).unwrap().0, 81);
        let (p, l) = generate_random_line_instance(40, 30, 2).unwrap();
        let mut lines = l.lines().to_vec();
        lines.push(Line::from_ints(1, 0, -3).unwrap());
        let l = LineSet::new(lines);
        let (dual, shear) = dual_incidence_count(&p, &l, 5).unwrap();
        assert!(!shear.is_zero());
        assert_eq!(dual, count_incidences_lines(&p, &l));
    }

    #[test]
    fn audit_small_cases() {
        let one = LineSet::new([Line::from_ints(1, -1, 0).unwrap()]);
        let report = audit_szemeredi_trotter(&pts(&[(3, 3)]), &one, None, 0).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.entry("lemma_bound").unwrap().observed, int(1));
        assert_eq!(report.entry("lemma_bound").unwrap().bound, int(2));

        let collinear = pts(&[(0, 0), (1, 1), (2, 2), (3, 3), (4, 4)]);
        let report = audit_szemeredi_trotter(&collinear, &one, None, 0).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.entry("lemma_bound").unwrap().observed, int(5));
    }

    #[test]
    fn audit_grid() {
        let (p, l) = generate_extremal_grid(2).unwrap();
        let report = audit_szemeredi_trotter(&p, &l, Some(int(4)), 3).unwrap();
        assert!(report.all_pass(), "{}", report.to_csv());
        for name in ["lemma_bound", "lines_meeting_cells", "cell_square_sum", "line_zeros_max"] {
            assert!(report.entry(name).is_some(), "{name}");
        }
    }

    #[test]
    fn random_instance_shape() {
        let (p, l) = generate_random_line_instance(64, 64, 9).unwrap();
        assert_eq!(p.len(), 64);
        assert_eq!(l.len(), 64);
        assert!(count_incidences_lines(&p, &l) >= 128);
    }
}
