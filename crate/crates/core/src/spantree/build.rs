//! Recursive construction of low-crossing spanning trees.

use std::collections::BTreeMap;
use std::fmt;

use petgraph::unionfind::UnionFind;

use super::{default_delta, perturb_points, segment_crosses_zero_int, GeoTree};
use crate::algebra::{monomial_count, rat, IntMultiPoly, MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::partition::{build_partition_with, PartitionConfig};
use crate::rng;

#[derive(Clone, Debug)]
pub struct TreeConfig {
    /// Target number of points per cell; the partition uses `r = n / c`.
    pub c: usize,
    pub eps: Rational,
    pub partition: PartitionConfig,
    /// Times `c` may be doubled at one level when the groups do not halve.
    pub max_doublings: u32,
    /// Fresh perturbations allowed when too many points land on the zero set.
    pub max_reperturbations: u32,
    /// Perturbation size; defaults to [`default_delta`] of the level's points.
    pub delta: Option<Rational>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            c: 16,
            eps: rat(1, 20),
            partition: PartitionConfig::default(),
            max_doublings: 3,
            max_reperturbations: 2,
            delta: None,
        }
    }
}

/// One level of the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelLog {
    pub level: usize,
    pub n: usize,
    /// `c` after doublings.
    pub c: usize,
    /// `None` for a star level.
    pub r: Option<Rational>,
    pub rounds: usize,
    pub total_degree: u32,
    pub cells: usize,
    pub boundary: usize,
    pub groups: usize,
    pub doublings: u32,
    pub reperturbations: u32,
    pub fallback_edges: usize,
}

impl fmt::Display for LevelLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.r.as_ref().map_or("-".to_string(), crate::algebra::format_rational);
        write!(
            f,
            "level {} n {} c {} r {} t {} degree {} cells {} boundary {} groups {} doublings {} reperturbations {} fallback {}",
            self.level,
            self.n,
            self.c,
            r,
            self.rounds,
            self.total_degree,
            self.cells,
            self.boundary,
            self.groups,
            self.doublings,
            self.reperturbations,
            self.fallback_edges
        )
    }
}

/// What a level used, kept so the edges can be re-checked.
#[derive(Clone, Debug)]
pub struct LevelRecord {
    /// Original indices of the level's points, increasing.
    pub members: Vec<usize>,
    /// Perturbed positions, aligned with `members`; empty for a star level.
    pub perturbed: Vec<Point>,
    pub factors: Vec<MultiPoly>,
    /// Indices into the tree's edges of segments inside cells.
    pub cell_edges: Vec<usize>,
    pub fallback_edges: Vec<usize>,
    /// Star edges of a final level.
    pub star_edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct TreeBuild {
    pub tree: GeoTree,
    pub levels: Vec<LevelRecord>,
    pub log: Vec<LevelLog>,
}

impl TreeBuild {
    pub fn fallback_edge_count(&self) -> usize {
        self.log.iter().map(|l| l.fallback_edges).sum()
    }

    /// Checks that every cell edge avoids the zero sets of its level's
    /// factors at the perturbed positions.
    pub fn cell_edges_avoid_zero_sets(&self) -> Result<bool> {
        for lv in &self.levels {
            let ints: Vec<IntMultiPoly> = lv.factors.iter().map(IntMultiPoly::from_rational).collect();
            for &e in &lv.cell_edges {
                let (u, v) = self.tree.edges[e];
                let pu = lv.members.binary_search(&u).expect("member");
                let pv = lv.members.binary_search(&v).expect("member");
                if segment_crosses_zero_int(&ints, &lv.perturbed[pu], &lv.perturbed[pv])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub fn build_low_crossing_tree(points: &[Point], c: usize, seed: u64) -> Result<TreeBuild> {
    build_low_crossing_tree_with(points, seed, &TreeConfig { c, ..TreeConfig::default() })
}

/// Groups of one attempt at a level: lists of positions into the level's
/// member list, each with its tree edges.
struct Attempt {
    perturbed: Vec<Point>,
    factors: Vec<MultiPoly>,
    rounds: usize,
    total_degree: u32,
    cells: usize,
    boundary: usize,
    groups: Vec<Vec<usize>>,
    edges: Vec<(usize, usize)>,
}

pub fn build_low_crossing_tree_with(points: &[Point], seed: u64, config: &TreeConfig) -> Result<TreeBuild> {
    if points.is_empty() {
        return Err(Error::invalid("tree needs at least one point"));
    }
    if config.c < 2 {
        return Err(Error::invalid("c must be at least 2"));
    }
    let dim = points[0].dim();
    for p in points {
        p.check_dim(dim)?;
    }
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(points.len() - 1);
    let mut levels = Vec::new();
    let mut log = Vec::new();
    let mut current: Vec<usize> = (0..points.len()).collect();
    let mut level = 0;
    loop {
        let m = current.len();
        let mut entry = LevelLog {
            level,
            n: m,
            c: config.c,
            r: None,
            rounds: 0,
            total_degree: 0,
            cells: 0,
            boundary: 0,
            groups: 1,
            doublings: 0,
            reperturbations: 0,
            fallback_edges: 0,
        };
        let mut c = config.c;
        let mut attempt = None;
        while m > c {
            let a = attempt_level(points, &current, c, seed, level, &mut entry, config)?;
            let halves = 2 * a.groups.len() <= m;
            entry.c = c;
            attempt = Some(a);
            if halves || entry.doublings >= config.max_doublings {
                break;
            }
            entry.doublings += 1;
            c *= 2;
            entry.c = c;
            attempt = None;
        }
        let Some(a) = attempt else {
            // star from the lowest index
            let first = edges.len();
            edges.extend(current[1..].iter().map(|&v| (current[0], v)));
            levels.push(LevelRecord {
                members: current.clone(),
                perturbed: Vec::new(),
                factors: Vec::new(),
                cell_edges: Vec::new(),
                fallback_edges: Vec::new(),
                star_edges: (first..edges.len()).collect(),
            });
            log.push(entry);
            break;
        };
        let first = edges.len();
        edges.extend(a.edges.iter().map(|&(u, v)| (current[u], current[v])));
        let cell_edges: Vec<usize> = (first..edges.len()).collect();
        let mut groups = a.groups;
        let mut fallback = Vec::new();
        if 2 * groups.len() > m {
            let (merged, extra) = merge_nearest(points, &current, &groups);
            for (u, v) in extra {
                fallback.push(edges.len());
                edges.push((current[u], current[v]));
            }
            groups = merged;
        }
        entry.groups = groups.len();
        entry.fallback_edges = fallback.len();
        entry.rounds = a.rounds;
        entry.total_degree = a.total_degree;
        entry.cells = a.cells;
        entry.boundary = a.boundary;
        levels.push(LevelRecord {
            members: current.clone(),
            perturbed: a.perturbed,
            factors: a.factors,
            cell_edges,
            fallback_edges: fallback,
            star_edges: Vec::new(),
        });
        log.push(entry);
        let mut next: Vec<usize> = groups.iter().map(|g| current[g[0]]).collect();
        next.sort_unstable();
        current = next;
        level += 1;
    }
    let tree = GeoTree::new(points.to_vec(), edges)?;
    Ok(TreeBuild { tree, levels, log })
}

fn attempt_level(
    points: &[Point],
    current: &[usize],
    c: usize,
    seed: u64,
    level: usize,
    entry: &mut LevelLog,
    config: &TreeConfig,
) -> Result<Attempt> {
    let m = current.len();
    let d = points[0].dim();
    let own: Vec<Point> = current.iter().map(|&i| points[i].clone()).collect();
    let delta = config.delta.clone().unwrap_or_else(|| default_delta(&own));
    let r = Rational::new(m.into(), c.into());
    entry.r = Some(r.clone());
    let mut tries = 0;
    loop {
        let tag = (level as u64) << 16 | (entry.doublings as u64) << 8 | tries as u64;
        let perturbed = perturb_points(&own, &delta, rng::derive_seed(seed, "tree-perturb", tag))?;
        let pr = build_partition_with(
            &perturbed,
            &r,
            &config.eps,
            rng::derive_seed(seed, "tree-partition", tag),
            &config.partition,
        )?;
        let allowed = monomial_count(d, pr.total_degree);
        if pr.boundary_points.len() > allowed && tries < config.max_reperturbations {
            tries += 1;
            entry.reperturbations += 1;
            continue;
        }
        let ints = pr.int_factors();
        let mut groups = Vec::new();
        let mut edges = Vec::new();
        for members in pr.cells.values() {
            let (g, e) = visibility_groups(&ints, &perturbed, members)?;
            groups.extend(g);
            edges.extend(e);
        }
        groups.extend(pr.boundary_points.iter().map(|&i| vec![i]));
        groups.sort();
        return Ok(Attempt {
            perturbed,
            rounds: pr.rounds(),
            total_degree: pr.total_degree,
            cells: pr.cells.len(),
            boundary: pr.boundary_points.len(),
            factors: pr.factors,
            groups,
            edges,
        });
    }
}

/// Components of the graph joining two points of a cell when their segment
/// avoids every zero set, with a spanning forest of that graph. Groups are
/// lists of positions with the lowest first.
#[allow(clippy::type_complexity)]
fn visibility_groups(
    factors: &[IntMultiPoly],
    perturbed: &[Point],
    members: &[usize],
) -> Result<(Vec<Vec<usize>>, Vec<(usize, usize)>)> {
    let k = members.len();
    let mut uf = UnionFind::<usize>::new(k);
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if uf.equiv(a, b) {
                continue;
            }
            if !segment_crosses_zero_int(factors, &perturbed[members[a]], &perturbed[members[b]])? {
                uf.union(a, b);
                edges.push((members[a], members[b]));
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..k {
        by_root.entry(uf.find(a)).or_default().push(members[a]);
    }
    let mut groups: Vec<Vec<usize>> = by_root.into_values().collect();
    groups.sort();
    Ok((groups, edges))
}

/// One round of joining each group to the group with the nearest
/// representative, skipping joins that would close a cycle. Returns the
/// merged groups and the new edges between representatives.
#[allow(clippy::type_complexity)]
fn merge_nearest(points: &[Point], current: &[usize], groups: &[Vec<usize>]) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let reps: Vec<&Point> = groups.iter().map(|g| &points[current[g[0]]]).collect();
    let k = groups.len();
    let mut uf = UnionFind::<usize>::new(k);
    let mut extra = Vec::new();
    for a in 0..k {
        let mut best: Option<(Rational, usize)> = None;
        for b in 0..k {
            if a == b {
                continue;
            }
            let dist = reps[a].squared_distance(reps[b]);
            if best.as_ref().is_none_or(|(bd, _)| dist < *bd) {
                best = Some((dist, b));
            }
        }
        if let Some((_, b)) = best {
            if uf.union(a, b) {
                let (u, v) = (groups[a][0].min(groups[b][0]), groups[a][0].max(groups[b][0]));
                extra.push((u, v));
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (a, g) in groups.iter().enumerate() {
        by_root.entry(uf.find(a)).or_default().extend(g);
    }
    let mut merged: Vec<Vec<usize>> = by_root
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    merged.sort();
    (merged, extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spantree::{crossing_number, grid_points, random_points, CrossingMode};

    #[test]
    fn base_case_is_a_star() {
        let pts: Vec<Point> = (0..3).map(|i| Point::from_ints(&[i, 0])).collect();
        let b = build_low_crossing_tree(&pts, 3, 1).unwrap();
        assert_eq!(b.tree.edges, vec![(0, 1), (0, 2)]);
        assert_eq!(crossing_number(&b.tree, CrossingMode::Exact).unwrap().max_crossings, 2);
        let one = build_low_crossing_tree(&pts[..1], 2, 1).unwrap();
        assert!(one.tree.edges.is_empty());
    }

    #[test]
    fn grid_tree_is_valid() {
        let pts = grid_points(8, 2);
        let b = build_low_crossing_tree(&pts, 8, 3).unwrap();
        b.tree.validate().unwrap();
        assert!(b.cell_edges_avoid_zero_sets().unwrap());
        assert!(b.log.len() >= 2);
        let again = build_low_crossing_tree(&pts, 8, 3).unwrap();
        assert_eq!(b.tree, again.tree);
    }

    #[test]
    fn duplicates_and_three_dimensions() {
        let mut pts = random_points(40, 3, 10, 2);
        pts.extend(pts[..5].to_vec());
        let b = build_low_crossing_tree(&pts, 8, 5).unwrap();
        b.tree.validate().unwrap();
        assert!(b.cell_edges_avoid_zero_sets().unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(build_low_crossing_tree(&[], 4, 1).is_err());
        assert!(build_low_crossing_tree(&grid_points(2, 2), 1, 1).is_err());
    }
}
