//! Exact decomposition of a line by the zero sets of several polynomials.
//!
//! Each factor is restricted to the line and its roots isolated separately.
//! Isolating intervals of different factors are refined against each other
//! until they are disjoint; two roots that cannot be separated are proven
//! equal through a common divisor and merged. Between consecutive distinct
//! roots a rational sample point is taken, so every maximal open interval of
//! constant sign vector is represented exactly once.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::One;

use super::intpoly::{IntMultiPoly, IntUniPoly, SturmChain};
use super::Rational;

/// One distinct root on the line; `lo == hi` marks an exact rational root,
/// otherwise the root lies strictly inside `(lo, hi)`.
#[derive(Clone, Debug)]
pub struct RootCluster {
    pub lo: Rational,
    pub hi: Rational,
    /// Indices of the factors vanishing at this root.
    pub factors: Vec<usize>,
}

impl RootCluster {
    fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Clone, Debug)]
pub struct LineDecomposition {
    /// Factors vanishing identically on the line.
    pub contained: Vec<bool>,
    /// Distinct roots, in increasing order.
    pub roots: Vec<RootCluster>,
    /// One parameter value inside each maximal root-free interval.
    pub samples: Vec<Rational>,
    /// Sign vector of the factors at each sample.
    pub sample_signs: Vec<Vec<i8>>,
}

impl LineDecomposition {
    /// Distinct sign vectors without zero entries realised along the line.
    pub fn nonzero_sign_vectors(&self) -> BTreeSet<Vec<i8>> {
        self.sample_signs
            .iter()
            .filter(|s| s.iter().all(|&x| x != 0))
            .cloned()
            .collect()
    }

    pub fn interval_count(&self) -> usize {
        self.samples.len()
    }
}

fn two() -> Rational {
    Rational::from_integer(BigInt::from(2))
}

/// Decomposes the parametrised line `t -> (start + t dir) / den` by the zero
/// sets of `factors`.
pub fn decompose_line(
    factors: &[IntMultiPoly],
    start: &[BigInt],
    dir: &[BigInt],
    den: &BigInt,
) -> LineDecomposition {
    let restricted: Vec<IntUniPoly> = factors
        .iter()
        .map(|f| f.restrict(start, dir, den))
        .collect();
    let contained: Vec<bool> = restricted.iter().map(|g| g.is_zero()).collect();
    let chains: Vec<Option<SturmChain>> = restricted
        .iter()
        .map(|g| (!g.is_zero()).then(|| SturmChain::new(g)))
        .collect();

    let mut clusters: Vec<RootCluster> = Vec::new();
    for (j, chain) in chains.iter().enumerate() {
        if let Some(chain) = chain {
            for iv in chain.isolate() {
                clusters.push(RootCluster {
                    lo: iv.lo,
                    hi: iv.hi,
                    factors: vec![j],
                });
            }
        }
    }

    let mut merger = Merger {
        chains: &chains,
        gcds: HashMap::new(),
    };
    merger.resolve(&mut clusters);

    let mut samples = Vec::with_capacity(clusters.len() + 1);
    if clusters.is_empty() {
        samples.push(Rational::from_integer(BigInt::from(0)));
    } else {
        samples.push(&clusters[0].lo - Rational::one());
        for w in clusters.windows(2) {
            samples.push((&w[0].hi + &w[1].lo) / two());
        }
        samples.push(&clusters[clusters.len() - 1].hi + Rational::one());
    }
    let sample_signs = samples
        .iter()
        .map(|t| {
            restricted
                .iter()
                .map(|g| if g.is_zero() { 0 } else { g.sign_at(t) })
                .collect()
        })
        .collect();

    LineDecomposition {
        contained,
        roots: clusters,
        samples,
        sample_signs,
    }
}

struct Merger<'a> {
    chains: &'a [Option<SturmChain>],
    gcds: HashMap<(usize, usize), Option<SturmChain>>,
}

impl Merger<'_> {
    fn rep(&self, c: &RootCluster) -> &IntUniPoly {
        self.chains[c.factors[0]]
            .as_ref()
            .expect("factor has roots")
            .square_free_part()
    }

    fn refine(&self, c: &mut RootCluster) {
        if c.is_exact() {
            return;
        }
        let rep = self.rep(c);
        let mid = (&c.lo + &c.hi) / two();
        let s = rep.sign_at(&mid);
        if s == 0 {
            c.lo = mid.clone();
            c.hi = mid;
        } else if s == rep.sign_at(&c.lo) {
            c.lo = mid;
        } else {
            c.hi = mid;
        }
    }

    /// Whether the roots of `a` and `b` coincide, given overlapping
    /// open intervals.
    fn same_root(&mut self, a: &RootCluster, b: &RootCluster) -> bool {
        let (fa, fb) = (a.factors[0], b.factors[0]);
        let key = (fa.min(fb), fa.max(fb));
        if !self.gcds.contains_key(&key) {
            let g = self.rep(a).gcd(self.rep(b));
            let chain = (g.degree() > 0).then(|| SturmChain::new(&g));
            self.gcds.insert(key, chain);
        }
        let lo = (&a.lo).max(&b.lo);
        let hi = (&a.hi).min(&b.hi);
        match &self.gcds[&key] {
            Some(chain) => chain.count_in_interval(lo, hi, true) > 0,
            None => false,
        }
    }

    fn resolve(&mut self, clusters: &mut Vec<RootCluster>) {
        loop {
            clusters.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
            let Some((i, j, kind)) = find_conflict(clusters) else {
                return;
            };
            if kind == Conflict::Touch {
                // endpoints are never roots of the open side; shrink it
                let (a, b) = clusters.split_at_mut(j);
                self.refine(&mut a[i]);
                self.refine(&mut b[0]);
                continue;
            }
            let (a, b) = (clusters[i].clone(), clusters[j].clone());
            match (a.is_exact(), b.is_exact()) {
                (true, true) => {
                    // equal exact roots
                    let mut merged = a;
                    merged.factors.extend(b.factors);
                    merged.factors.sort_unstable();
                    clusters[i] = merged;
                    clusters.remove(j);
                }
                (true, false) | (false, true) => {
                    let (ex, op, op_idx, ex_idx) = if a.is_exact() {
                        (a, b, j, i)
                    } else {
                        (b, a, i, j)
                    };
                    let rep = self.rep(&op);
                    if rep.sign_at(&ex.lo) == 0 {
                        let mut merged = ex;
                        merged.factors.extend(op.factors);
                        merged.factors.sort_unstable();
                        clusters[ex_idx] = merged;
                        clusters.remove(op_idx);
                    } else {
                        let mut op = op;
                        if rep.sign_at(&op.lo) != rep.sign_at(&ex.lo) {
                            op.hi = ex.lo.clone();
                        } else {
                            op.lo = ex.lo.clone();
                        }
                        clusters[op_idx] = op;
                    }
                }
                (false, false) => {
                    if self.same_root(&a, &b) {
                        let mut merged = RootCluster {
                            lo: (&a.lo).max(&b.lo).clone(),
                            hi: (&a.hi).min(&b.hi).clone(),
                            factors: a.factors.clone(),
                        };
                        merged.factors.extend(b.factors.iter().copied());
                        merged.factors.sort_unstable();
                        clusters[i] = merged;
                        clusters.remove(j);
                    } else {
                        let mut a = a;
                        let mut b = b;
                        self.refine(&mut a);
                        self.refine(&mut b);
                        clusters[i] = a;
                        clusters[j] = b;
                    }
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Conflict {
    /// The two root locations may coincide.
    Overlap,
    /// Distinct roots whose intervals share an endpoint; no gap to sample.
    Touch,
}

/// First pair of clusters whose root locations are not yet separated by a
/// positive gap.
fn find_conflict(clusters: &[RootCluster]) -> Option<(usize, usize, Conflict)> {
    for i in 0..clusters.len() {
        for j in i + 1..clusters.len() {
            let (a, b) = (&clusters[i], &clusters[j]);
            if b.lo > a.hi {
                break;
            }
            let kind = match (a.is_exact(), b.is_exact()) {
                (true, true) => (a.lo == b.lo).then_some(Conflict::Overlap),
                (true, false) => Some(if b.lo < a.lo {
                    Conflict::Overlap
                } else {
                    Conflict::Touch
                }),
                (false, true) => Some(if b.lo < a.hi {
                    Conflict::Overlap
                } else {
                    Conflict::Touch
                }),
                (false, false) => Some(if b.lo < a.hi {
                    Conflict::Overlap
                } else {
                    Conflict::Touch
                }),
            };
            if let Some(kind) = kind {
                return Some((i, j, kind));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, MultiPoly};

    fn factor(terms: Vec<(Vec<u32>, i64)>) -> IntMultiPoly {
        MultiPoly::from_terms(2, terms.into_iter().map(|(e, c)| (e, int(c))))
            .unwrap()
            .to_int()
    }

    fn along_x_axis() -> (Vec<BigInt>, Vec<BigInt>, BigInt) {
        (
            vec![BigInt::from(0), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(0)],
            BigInt::from(1),
        )
    }

    #[test]
    fn axis_factors_on_a_generic_line() {
        // factors x and y along the line y = x + 1 (points (t, t + 1))
        let fx = factor(vec![(vec![1, 0], 1)]);
        let fy = factor(vec![(vec![0, 1], 1)]);
        let start = vec![BigInt::from(0), BigInt::from(1)];
        let dir = vec![BigInt::from(1), BigInt::from(1)];
        let dec = decompose_line(&[fx, fy], &start, &dir, &BigInt::one());
        assert_eq!(dec.roots.len(), 2);
        assert_eq!(dec.samples.len(), 3);
        assert_eq!(dec.nonzero_sign_vectors().len(), 3);
    }

    #[test]
    fn shared_irrational_root_is_merged() {
        // x^2 - 2 and x^2 - 2 + y share the roots +-sqrt 2 on the x-axis
        let f1 = factor(vec![(vec![2, 0], 1), (vec![0, 0], -2)]);
        let f2 = factor(vec![(vec![2, 0], 1), (vec![0, 1], 1), (vec![0, 0], -2)]);
        let (s, d, den) = along_x_axis();
        let dec = decompose_line(&[f1, f2], &s, &d, &den);
        assert_eq!(dec.roots.len(), 2);
        assert!(dec.roots.iter().all(|c| c.factors == vec![0, 1]));
        assert_eq!(dec.samples.len(), 3);
    }

    #[test]
    fn close_distinct_roots_are_separated() {
        // x^2 - 2 and 1000 x - 1414 (root 1.414 just below sqrt 2)
        let f1 = factor(vec![(vec![2, 0], 1), (vec![0, 0], -2)]);
        let f2 = factor(vec![(vec![1, 0], 1000), (vec![0, 0], -1414)]);
        let (s, d, den) = along_x_axis();
        let dec = decompose_line(&[f1, f2], &s, &d, &den);
        assert_eq!(dec.roots.len(), 3);
        for w in dec.roots.windows(2) {
            assert!(w[0].hi < w[1].lo);
        }
        assert_eq!(dec.nonzero_sign_vectors().len(), 4);
    }

    #[test]
    fn contained_factor_zeroes_all_samples() {
        let fy = factor(vec![(vec![0, 1], 1)]);
        let fx = factor(vec![(vec![1, 0], 1)]);
        let (s, d, den) = along_x_axis();
        let dec = decompose_line(&[fy, fx], &s, &d, &den);
        assert_eq!(dec.contained, vec![true, false]);
        assert!(dec.nonzero_sign_vectors().is_empty());
    }

    #[test]
    fn exact_and_open_roots_mix() {
        // x and x^3 - 2x share the root 0
        let f1 = factor(vec![(vec![1, 0], 1)]);
        let f2 = factor(vec![(vec![3, 0], 1), (vec![1, 0], -2)]);
        let (s, d, den) = along_x_axis();
        let dec = decompose_line(&[f1, f2], &s, &d, &den);
        assert_eq!(dec.roots.len(), 3);
        let zero = dec.roots.iter().find(|c| c.factors.len() == 2).unwrap();
        assert_eq!(zero.lo, int(0));
    }
}
