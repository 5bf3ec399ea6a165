//! Crossing numbers of straight-edge trees.
//!
//! Exact mode enumerates one representative hyperplane per achievable
//! partition of the vertices. Every hyperplane avoiding the points can be
//! moved, without changing which side any point is on, until it passes
//! through `d` affinely independent points; the sides of the points on it
//! are then decided by an affine function on the hyperplane, which recurses
//! one dimension down. In the plane a candidate is a line through two points
//! plus a split of the points on that line into a prefix and a suffix; in
//! space it is a plane through three points, a line inside it through two of
//! them, and a split along that line. Axis-parallel hyperplanes in the gaps
//! between coordinate values cover inputs with no such hyperplane.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use super::GeoTree;
use crate::algebra::Rational;
use crate::error::{Error, Result};
use crate::geometry::{IntPoints, Point};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingMode {
    Exact,
    Sampled { count: usize, seed: u64 },
}

/// The hyperplane `normal . x + offset = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperplane {
    pub normal: Vec<Rational>,
    pub offset: Rational,
}

impl Hyperplane {
    pub fn eval(&self, p: &Point) -> Rational {
        self.normal
            .iter()
            .zip(p.coords())
            .fold(self.offset.clone(), |acc, (a, x)| acc + a * x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingReport {
    pub max_crossings: usize,
    pub witness: Hyperplane,
    pub mode: CrossingMode,
    pub candidates_examined: usize,
}

impl CrossingReport {
    /// Sampled maxima only bound the crossing number from below.
    pub fn is_lower_bound(&self) -> bool {
        matches!(self.mode, CrossingMode::Sampled { .. })
    }
}

/// Indices of the edges whose endpoints lie strictly on opposite sides of
/// `h`, or `None` when `h` passes through a point.
pub fn crossings_of(tree: &GeoTree, h: &Hyperplane) -> Option<Vec<usize>> {
    let signs: Vec<Ordering> = tree.points.iter().map(|p| h.eval(p).cmp(&Rational::zero())).collect();
    if signs.contains(&Ordering::Equal) {
        return None;
    }
    Some(
        tree.edges
            .iter()
            .enumerate()
            .filter(|(_, &(u, v))| signs[u] != signs[v])
            .map(|(i, _)| i)
            .collect(),
    )
}

pub fn crossing_number(tree: &GeoTree, mode: CrossingMode) -> Result<CrossingReport> {
    tree.validate()?;
    let d = tree.dim();
    if let CrossingMode::Sampled { count: 0, .. } = mode {
        return Err(Error::invalid("sample count must be positive"));
    }
    if mode == CrossingMode::Exact && d > 3 {
        return Err(Error::invalid("exact crossing numbers need dimension at most 3"));
    }
    let mut unique: Vec<Point> = tree.points.clone();
    unique.sort();
    unique.dedup();
    let ip = IntPoints::new(&unique);
    let limit = match d {
        1 => 60,
        2 => 50,
        _ => 24,
    };
    let id_of: Vec<usize> = tree
        .points
        .iter()
        .map(|p| unique.binary_search(p).expect("present"))
        .collect();
    let (best, examined) = match ip.to_i128(limit) {
        Some(pts) => search(&pts, tree, &id_of, mode),
        None => search(&ip.nums, tree, &id_of, mode),
    };
    let big: Vec<Vec<BigInt>> = ip.nums.clone();
    let w = witness(&big, &best.cand, &best.hyper);
    let witness = Hyperplane {
        normal: w[..d].iter().map(|c| Rational::from_integer(c * &ip.den)).collect(),
        offset: Rational::from_integer(w[d].clone()),
    };
    debug_assert_eq!(crossings_of(tree, &witness).map(|v| v.len()), Some(best.count));
    Ok(CrossingReport {
        max_crossings: best.count,
        witness,
        mode,
        candidates_examined: examined,
    })
}

trait Ring:
    Clone + Ord + Send + Sync + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn from_i64(x: i64) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Ring for i128 {
    fn from_i64(x: i64) -> Self {
        x as i128
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Ring for BigInt {
    fn from_i64(x: i64) -> Self {
        BigInt::from(x)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

fn sgn<T: Ring>(x: &T) -> i8 {
    x.cmp(&T::zero()) as i8
}

fn dot<T: Ring>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

fn diff<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn cross<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// A candidate, ordered by enumeration so ties go to the earliest one.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Cand {
    /// Beyond every point along the first axis.
    Outside,
    Axis { axis: usize, gap: usize },
    /// Line through unique points `i < j`; the first `split` points on it in
    /// order along the line get sign `-o`, the rest `o`.
    Line { i: usize, j: usize, split: usize, neg: bool },
    /// Plane through `i, j, k`; inside it the line through `a, b`; points of
    /// the plane off the line take `o1 * sign(A)`, points on the line are
    /// split as for `Line` with orientation `o2`.
    Plane { i: usize, j: usize, k: usize, a: usize, b: usize, split: usize, neg1: bool, neg2: bool },
    Sample { index: usize },
}

/// Data needed to rebuild the witness of a candidate: the sorted on-line
/// points for splits, or the coefficients themselves for samples.
#[derive(Clone, Debug, Default)]
struct Hyper {
    order: Vec<usize>,
    coeffs: Vec<BigInt>,
}

#[derive(Clone, Debug)]
struct Best {
    count: usize,
    cand: Cand,
    hyper: Hyper,
}

impl Best {
    fn better(self, other: Best) -> Best {
        match self.count.cmp(&other.count) {
            Ordering::Greater => self,
            Ordering::Less => other,
            Ordering::Equal => {
                if self.cand <= other.cand {
                    self
                } else {
                    other
                }
            }
        }
    }

    fn offer(&mut self, count: usize, cand: impl FnOnce() -> (Cand, Hyper)) {
        if count > self.count {
            let (cand, hyper) = cand();
            *self = Best { count, cand, hyper };
        }
    }
}

struct Graph {
    /// Edges between distinct unique points.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    fn new(tree: &GeoTree, id_of: &[usize], n: usize) -> Self {
        let edges: Vec<(usize, usize)> = tree
            .edges
            .iter()
            .map(|&(u, v)| (id_of[u], id_of[v]))
            .filter(|(u, v)| u != v)
            .collect();
        let mut adj = vec![Vec::new(); n];
        for (e, &(u, v)) in edges.iter().enumerate() {
            adj[u].push(e);
            adj[v].push(e);
        }
        Graph { edges, adj }
    }

    fn count(&self, signs: &[i8]) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| signs[u] * signs[v] < 0)
            .count()
    }

    /// Edges touching `on`, each once.
    fn touching(&self, on: &[usize]) -> Vec<usize> {
        let mut es: Vec<usize> = on.iter().flat_map(|&p| self.adj[p].iter().copied()).collect();
        es.sort_unstable();
        es.dedup();
        es
    }

    /// Crossings among `touching` with the signs of `on` overridden.
    fn count_touching(&self, touching: &[usize], signs: &[i8]) -> usize {
        touching
            .iter()
            .filter(|&&e| {
                let (u, v) = self.edges[e];
                signs[u] * signs[v] < 0
            })
            .count()
    }
}

fn search<T: Ring>(pts: &[Vec<T>], tree: &GeoTree, id_of: &[usize], mode: CrossingMode) -> (Best, usize) {
    let n = pts.len();
    let d = tree.dim();
    let graph = Graph::new(tree, id_of, n);
    let start = Best {
        count: 0,
        cand: Cand::Outside,
        hyper: Hyper::default(),
    };
    if graph.edges.is_empty() {
        return (start, 1);
    }
    match mode {
        CrossingMode::Sampled { count, seed } => sampled(pts, &graph, count, seed, start),
        CrossingMode::Exact => {
            let (mut best, mut examined) = axis_candidates(pts, &graph, start);
            let (b, e) = match d {
                2 => lines(pts, &graph),
                3 => planes(pts, &graph),
                _ => (None, 0),
            };
            if let Some(b) = b {
                best = best.better(b);
            }
            examined += e;
            (best, examined)
        }
    }
}

fn axis_candidates<T: Ring>(pts: &[Vec<T>], graph: &Graph, mut best: Best) -> (Best, usize) {
    let d = pts[0].len();
    let mut examined = 0;
    for axis in 0..d {
        let mut vals: Vec<T> = pts.iter().map(|p| p[axis].clone()).collect();
        vals.sort();
        vals.dedup();
        for gap in 0..vals.len().saturating_sub(1) {
            examined += 1;
            let signs: Vec<i8> = pts.iter().map(|p| if p[axis] <= vals[gap] { -1 } else { 1 }).collect();
            best.offer(graph.count(&signs), || (Cand::Axis { axis, gap }, Hyper::default()));
        }
    }
    (best, examined)
}

/// Sides of the points on a line for a split: prefix `-o`, suffix `o`.
fn apply_split(signs: &mut [i8], order: &[usize], split: usize, o: i8) {
    for (idx, &p) in order.iter().enumerate() {
        signs[p] = if idx < split { -o } else { o };
    }
}

fn lines<T: Ring>(pts: &[Vec<T>], graph: &Graph) -> (Option<Best>, usize) {
    let n = pts.len();
    let results: Vec<(Option<Best>, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<Best> = None;
            let mut examined = 0;
            let mut signs = vec![0i8; n];
            for j in i + 1..n {
                let a = pts[j][1].clone() - pts[i][1].clone();
                let b = pts[i][0].clone() - pts[j][0].clone();
                let c = -(a.clone() * pts[i][0].clone() + b.clone() * pts[i][1].clone());
                let mut on = Vec::new();
                for (p, x) in pts.iter().enumerate() {
                    let h = a.clone() * x[0].clone() + b.clone() * x[1].clone() + c.clone();
                    signs[p] = sgn(&h);
                    if signs[p] == 0 {
                        on.push(p);
                    }
                }
                // each line once, from its two lowest points
                if on[0] != i || on[1] != j {
                    continue;
                }
                let key = |p: &usize| b.clone() * pts[*p][0].clone() - a.clone() * pts[*p][1].clone();
                let mut order = on.clone();
                order.sort_by_cached_key(key);
                let touching = graph.touching(&order);
                let base = graph.count(&signs) - graph.count_touching(&touching, &signs);
                for split in 0..order.len() {
                    for neg in [false, true] {
                        examined += 1;
                        apply_split(&mut signs, &order, split, if neg { -1 } else { 1 });
                        let count = base + graph.count_touching(&touching, &signs);
                        let cand = Cand::Line { i, j, split, neg };
                        let better = match &best {
                            None => true,
                            Some(b) => count > b.count,
                        };
                        if better {
                            best = Some(Best {
                                count,
                                cand,
                                hyper: Hyper {
                                    order: order.clone(),
                                    coeffs: Vec::new(),
                                },
                            });
                        }
                    }
                }
                for &p in &order {
                    signs[p] = 0;
                }
            }
            (best, examined)
        })
        .collect();
    merge(results)
}

fn merge(results: Vec<(Option<Best>, usize)>) -> (Option<Best>, usize) {
    let mut out: Option<Best> = None;
    let mut examined = 0;
    for (b, e) in results {
        examined += e;
        if let Some(b) = b {
            out = Some(match out {
                None => b,
                Some(o) => o.better(b),
            });
        }
    }
    (out, examined)
}

fn planes<T: Ring>(pts: &[Vec<T>], graph: &Graph) -> (Option<Best>, usize) {
    let n = pts.len();
    let results: Vec<(Option<Best>, usize)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best: Option<Best> = None;
            let mut examined = 0;
            let mut signs = vec![0i8; n];
            for j in i + 1..n {
                let u = diff(&pts[j], &pts[i]);
                for k in j + 1..n {
                    let normal = cross(&u, &diff(&pts[k], &pts[i]));
                    if normal.iter().all(Zero::is_zero) {
                        continue;
                    }
                    let off = -dot(&normal, &pts[i]);
                    let mut on = Vec::new();
                    for (p, x) in pts.iter().enumerate() {
                        signs[p] = sgn(&(dot(&normal, x) + off.clone()));
                        if signs[p] == 0 {
                            on.push(p);
                        }
                    }
                    // each plane once, from its first spanning triple
                    let collinear = |q: usize| cross(&u, &diff(&pts[q], &pts[i])).iter().all(Zero::is_zero);
                    if on[0] != i || on[1] != j || on[2..].iter().copied().find(|&q| !collinear(q)) != Some(k) {
                        for &p in &on {
                            signs[p] = 0;
                        }
                        continue;
                    }
                    let touching = graph.touching(&on);
                    let base = graph.count(&signs) - graph.count_touching(&touching, &signs);
                    for (ai, &a) in on.iter().enumerate() {
                        for &b in &on[ai + 1..] {
                            let v = diff(&pts[b], &pts[a]);
                            let m = cross(&normal, &v);
                            let side: Vec<i8> = on.iter().map(|&q| sgn(&dot(&diff(&pts[q], &pts[a]), &m))).collect();
                            let line: Vec<usize> = on.iter().zip(&side).filter(|(_, &s)| s == 0).map(|(&q, _)| q).collect();
                            if line[0] != a || line[1] != b {
                                continue;
                            }
                            let mut order = line.clone();
                            order.sort_by_cached_key(|&q| dot(&v, &pts[q]));
                            for neg1 in [false, true] {
                                let o1: i8 = if neg1 { -1 } else { 1 };
                                for (&q, &s) in on.iter().zip(&side) {
                                    signs[q] = o1 * s;
                                }
                                for split in 0..order.len() {
                                    for neg2 in [false, true] {
                                        examined += 1;
                                        apply_split(&mut signs, &order, split, if neg2 { -1 } else { 1 });
                                        let count = base + graph.count_touching(&touching, &signs);
                                        let better = match &best {
                                            None => true,
                                            Some(b) => count > b.count,
                                        };
                                        if better {
                                            best = Some(Best {
                                                count,
                                                cand: Cand::Plane { i, j, k, a, b, split, neg1, neg2 },
                                                hyper: Hyper {
                                                    order: order.clone(),
                                                    coeffs: Vec::new(),
                                                },
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                    for &p in &on {
                        signs[p] = 0;
                    }
                }
            }
            (best, examined)
        })
        .collect();
    merge(results)
}

const SAMPLE_RANGE: i64 = 1 << 16;

/// Random normal and an offset between the projections of two random points.
fn sample_hyperplane<T: Ring>(pts: &[Vec<T>], g: &mut rng::Rng) -> Vec<T> {
    let d = pts[0].len();
    let normal: Vec<T> = loop {
        let v: Vec<i64> = (0..d).map(|_| g.gen_range(-SAMPLE_RANGE..=SAMPLE_RANGE)).collect();
        if v.iter().any(|&x| x != 0) {
            break v.into_iter().map(T::from_i64).collect();
        }
    };
    let p = g.gen_range(0..pts.len());
    let q = g.gen_range(0..pts.len());
    let lam = g.gen_range(1..SAMPLE_RANGE);
    let tau = T::from_i64(lam) * dot(&normal, &pts[p]) + T::from_i64(SAMPLE_RANGE - lam) * dot(&normal, &pts[q]);
    let scale = T::from_i64(SAMPLE_RANGE);
    let mut h: Vec<T> = normal.into_iter().map(|c| c * scale.clone()).collect();
    h.push(-tau);
    h
}

fn sampled<T: Ring>(pts: &[Vec<T>], graph: &Graph, count: usize, seed: u64, start: Best) -> (Best, usize) {
    let d = pts[0].len();
    if pts.len() == 1 {
        return (start, 0);
    }
    let results: Vec<Option<(usize, Vec<T>)>> = (0..count)
        .into_par_iter()
        .map(|s| {
            let mut g = rng::stream(seed, "crossing-sample", s as u64);
            for _ in 0..8 {
                let h = sample_hyperplane(pts, &mut g);
                let signs: Vec<i8> = pts.iter().map(|x| sgn(&(dot(&h[..d], x) + h[d].clone()))).collect();
                if !signs.contains(&0) {
                    return Some((graph.count(&signs), h));
                }
            }
            None
        })
        .collect();
    let mut best = start;
    for (index, r) in results.into_iter().enumerate() {
        if let Some((c, h)) = r {
            best.offer(c, || {
                let hyper = Hyper {
                    order: Vec::new(),
                    coeffs: h.iter().map(Ring::to_big).collect(),
                };
                (Cand::Sample { index }, hyper)
            });
        }
    }
    (best, count)
}

/// Integer coefficients `(w_1, ..., w_d, w_0)` of a hyperplane realising
/// the candidate's sign pattern on the scaled points.
fn witness(pts: &[Vec<BigInt>], cand: &Cand, hyper: &Hyper) -> Vec<BigInt> {
    let d = pts[0].len();
    let one = BigInt::from(1);
    match *cand {
        Cand::Outside => {
            let max = pts.iter().map(|p| p[0].clone()).max().expect("nonempty");
            let mut w = vec![BigInt::zero(); d + 1];
            w[0] = one.clone();
            w[d] = -(max + one);
            w
        }
        Cand::Sample { .. } => hyper.coeffs.clone(),
        Cand::Axis { axis, gap } => {
            let mut vals: Vec<&BigInt> = pts.iter().map(|p| &p[axis]).collect();
            vals.sort();
            vals.dedup();
            let mut w = vec![BigInt::zero(); d + 1];
            w[axis] = BigInt::from(2);
            w[d] = -(vals[gap] + vals[gap + 1]);
            w
        }
        Cand::Line { i, j, split, neg } => {
            let a = &pts[j][1] - &pts[i][1];
            let b = &pts[i][0] - &pts[j][0];
            let c = -(&a * &pts[i][0] + &b * &pts[i][1]);
            let h = vec![a.clone(), b.clone(), c];
            let t = vec![BigInt::from(2) * &b, BigInt::from(-2) * &a, BigInt::zero()];
            let along = |p: usize| &b * &pts[p][0] - &a * &pts[p][1];
            let tau2 = split_value(&hyper.order, split, along);
            let mut t = t;
            t[2] = -tau2;
            let o = if neg { -1 } else { 1 };
            let target = target_signs(pts, &h, &hyper.order, split, o, None);
            combine(pts, &[h, t.into_iter().map(|x| x * o).collect()], &target)
        }
        Cand::Plane { i, j, k, a, b, split, neg1, neg2 } => {
            let u = diff(&pts[j], &pts[i]);
            let normal = cross(&u, &diff(&pts[k], &pts[i]));
            let mut h = normal.clone();
            h.push(-dot(&normal, &pts[i]));
            let v = diff(&pts[b], &pts[a]);
            let m = cross(&normal, &v);
            let mut aff = m.clone();
            aff.push(-dot(&m, &pts[a]));
            let tau2 = split_value(&hyper.order, split, |p| dot(&v, &pts[p]));
            let mut t: Vec<BigInt> = v.iter().map(|x| x * 2).collect();
            t.push(-tau2);
            let o1 = if neg1 { -1 } else { 1 };
            let o2 = if neg2 { -1 } else { 1 };
            let inplane: Vec<BigInt> = aff.into_iter().map(|x| x * o1).collect();
            let target = target_signs(pts, &h, &hyper.order, split, o2, Some(&inplane));
            combine(pts, &[h, inplane, t.into_iter().map(|x| x * o2).collect()], &target)
        }
    }
}

/// Twice the split position along the line: between the `split - 1`-th
/// and `split`-th points, or before the first.
fn split_value(order: &[usize], split: usize, along: impl Fn(usize) -> BigInt) -> BigInt {
    if split == 0 {
        BigInt::from(2) * (along(order[0]) - 1)
    } else {
        along(order[split - 1]) + along(order[split])
    }
}

fn eval_affine(w: &[BigInt], p: &[BigInt]) -> BigInt {
    let d = p.len();
    dot(&w[..d], p) + &w[d]
}

fn target_signs(
    pts: &[Vec<BigInt>],
    h: &[BigInt],
    order: &[usize],
    split: usize,
    o: i8,
    inplane: Option<&Vec<BigInt>>,
) -> Vec<i8> {
    let mut signs: Vec<i8> = pts
        .iter()
        .map(|p| {
            let s = sgn(&eval_affine(h, p));
            match (s, inplane) {
                (0, Some(a)) => sgn(&eval_affine(a, p)),
                _ => s,
            }
        })
        .collect();
    apply_split(&mut signs, order, split, o);
    signs
}

/// `sum_k 2^(e (m - 1 - k)) w_k`, with `e` grown until the signs match.
fn combine(pts: &[Vec<BigInt>], parts: &[Vec<BigInt>], target: &[i8]) -> Vec<BigInt> {
    let len = parts[0].len();
    let mut e = 1u32;
    loop {
        let step = BigInt::from(1) << e;
        let mut w = vec![BigInt::zero(); len];
        for part in parts {
            for (x, y) in w.iter_mut().zip(part) {
                *x = &*x * &step + y;
            }
        }
        if pts.iter().zip(target).all(|(p, &s)| sgn(&eval_affine(&w, p)) == s) {
            return w;
        }
        e *= 2;
    }
}
