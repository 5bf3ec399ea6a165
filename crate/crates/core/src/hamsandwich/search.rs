//! Verified search for a simultaneously bisecting polynomial.
//!
//! The search works in normalised coordinates (a dyadic shift and scale that
//! maps the points into `[-1, 1]^d`) and in the basis of products of
//! Chebyshev polynomials `T_{e_1}(u_1) ... T_{e_d}(u_d)` with `|e| <= D`. That
//! basis spans the same space as the monomials and is far better
//! conditioned. Coefficients live on the unit sphere. Each set contributes the
//! square of its smoothed excess: the amount by which the soft imbalance
//! `sum_p tanh(v_p / sigma_i)` exceeds what the side caps allow, with `v_p`
//! the polynomial value at `p` and `sigma_i` a shrinking fraction of the
//! set's own root mean square value. Steps
//! are Levenberg-Marquardt steps on the per-set residuals. Whenever the float
//! signs already satisfy the caps, the coefficients are rounded to dyadic
//! rationals and checked exactly. Odd sets at zero slack need a point on the
//! zero set, and degenerate sets may too; at zero slack such points are
//! forced onto the zero set by an exact projection ("snapping").

use std::collections::{HashMap, HashSet};

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng as _;
use rayon::prelude::*;

use super::certificate::{counts_from_signs, side_cap, verify_bisection, BisectionCertificate};
use crate::algebra::{monomial_count, monomials, signs_at_points, to_f64, Exponents, MultiPoly, Rational};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::linalg;
use crate::rng;

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Restarts evaluated concurrently per batch (0 means one per worker
    /// thread); the lowest passing index of a batch wins, so the result does
    /// not depend on this value.
    pub batch: usize,
    /// Give up on a restart after this many iterations without progress.
    pub patience: usize,
    pub trace: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 64,
            max_iterations: 5000,
            batch: 0,
            patience: 400,
            trace: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow {
    pub restart: usize,
    pub iteration: usize,
    pub loss: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug)]
pub struct Bisector {
    pub poly: MultiPoly,
    pub certificate: BisectionCertificate,
    pub restart: usize,
    pub iterations: usize,
    pub trace: Vec<TraceRow>,
}

/// Finds a nonzero polynomial of degree at most `degree` whose exact
/// certificate passes for every set at slack `eps`.
pub fn find_bisecting_polynomial(
    sets: &[Vec<Point>],
    degree: u32,
    eps: &Rational,
    seed: u64,
) -> Result<Bisector> {
    find_bisecting_polynomial_with(sets, degree, eps, seed, &SearchConfig::default())
}

pub fn find_bisecting_polynomial_with(
    sets: &[Vec<Point>],
    degree: u32,
    eps: &Rational,
    seed: u64,
    config: &SearchConfig,
) -> Result<Bisector> {
    let problem = Problem::new(sets, degree, eps)?;
    let mut trace = Vec::new();
    let mut best: Option<(usize, Vec<Rational>)> = None;
    let mut start = 0;
    while start < config.restarts {
        let batch = match config.batch {
            0 => rayon::current_num_threads(),
            b => b,
        };
        let end = (start + batch).min(config.restarts);
        let outcomes: Vec<Outcome> = (start..end)
            .into_par_iter()
            .map(|rho| problem.run_restart(rho, seed, config))
            .collect();
        for out in outcomes {
            trace.extend(out.trace);
            match out.result {
                Ok((coeffs, iterations)) => {
                    let poly = problem.to_original(&coeffs);
                    let certificate = verify_bisection(&poly, sets, eps);
                    if certificate.passes() {
                        return Ok(Bisector {
                            poly,
                            certificate,
                            restart: out.restart,
                            iterations,
                            trace,
                        });
                    }
                }
                Err((excess, coeffs)) => {
                    if best.as_ref().is_none_or(|(e, _)| excess < *e) {
                        best = Some((excess, coeffs));
                    }
                }
            }
        }
        start = end;
    }
    let best_cert = match best {
        Some((_, coeffs)) => verify_bisection(&problem.to_original(&coeffs), sets, eps),
        None => BisectionCertificate {
            sets: Vec::new(),
            slack: crate::algebra::format_rational(eps),
        },
    };
    Err(Error::BisectionNotFound {
        degree,
        attempts: config.restarts,
        best: Box::new(best_cert),
    })
}

struct Outcome {
    restart: usize,
    /// Exactly verified normalised coefficients and iteration count, or the
    /// best excess seen with its rounded coefficients.
    result: std::result::Result<(Vec<Rational>, usize), (usize, Vec<Rational>)>,
    trace: Vec<TraceRow>,
}

struct Problem {
    num_vars: usize,
    degree: u32,
    /// Number of coefficients, constant included.
    width: usize,
    eps: Rational,
    /// Row-major `n x width` feature matrix in normalised coordinates.
    features: Vec<f64>,
    basis: Vec<Exponents>,
    /// Integer monomial coefficients of `T_0, ..., T_D`.
    chebyshev: Vec<Vec<BigInt>>,
    /// Soft imbalance tolerated per set before the loss charges it.
    margins: Vec<f64>,
    /// Snapping is tried: some set cannot meet its caps without a point on
    /// the zero set, or the slack is zero and degenerate input (repeated or
    /// collinear points) may force zeros.
    snapping: bool,
    set_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    caps: Vec<usize>,
    /// Exact normalised points.
    normalized: Vec<Point>,
    center: Vec<Rational>,
    scale: Rational,
    /// Factor of the ridge-regularised Gram matrix of the features.
    gram: Option<Cholesky<f64, Dyn>>,
    /// Position of each coordinate's degree-one feature.
    unit_feature: Vec<usize>,
}

impl Problem {
    fn new(sets: &[Vec<Point>], degree: u32, eps: &Rational) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::invalid("no sets to bisect"));
        }
        if sets.iter().any(|s| s.is_empty()) {
            return Err(Error::invalid("every set must be nonempty"));
        }
        if eps < &Rational::zero() {
            return Err(Error::invalid("slack must be nonnegative"));
        }
        let num_vars = sets[0][0].dim();
        for p in sets.iter().flatten() {
            p.check_dim(num_vars)?;
        }
        if degree == 0 || monomial_count(num_vars, degree) < sets.len() {
            return Err(Error::invalid(format!(
                "degree {degree} in {num_vars} variables has {} nonconstant monomials, fewer than {} sets",
                monomial_count(num_vars, degree),
                sets.len()
            )));
        }
        let (center, scale) = normalization(sets.iter().flatten(), num_vars);
        let inv = Rational::one() / &scale;
        let mut normalized = Vec::new();
        let mut set_of = Vec::new();
        let mut members = vec![Vec::new(); sets.len()];
        for (i, s) in sets.iter().enumerate() {
            for p in s {
                members[i].push(normalized.len());
                set_of.push(i);
                normalized.push(Point::new(
                    p.coords()
                        .iter()
                        .zip(&center)
                        .map(|(x, c)| (x - c) * &inv)
                        .collect(),
                ));
            }
        }
        let basis = monomials(num_vars, degree);
        let width = basis.len();
        let mut features = Vec::with_capacity(normalized.len() * width);
        for p in &normalized {
            let u = p.to_f64();
            let powers: Vec<Vec<f64>> = u
                .iter()
                .map(|&x| {
                    let mut t = vec![1.0, x];
                    for k in 2..=degree as usize {
                        t.push(2.0 * x * t[k - 1] - t[k - 2]);
                    }
                    t
                })
                .collect();
            for e in &basis {
                features.push(
                    e.as_slice()
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| powers[i][k as usize])
                        .product(),
                );
            }
        }
        let unit_feature: Vec<usize> = (0..num_vars)
            .map(|v| {
                let e = Exponents::unit(num_vars, v);
                basis.iter().position(|b| *b == e).expect("degree at least one")
            })
            .collect();
        let fm = DMatrix::from_row_slice(normalized.len(), width, &features);
        let mut g = fm.transpose() * &fm;
        let ridge = 1e-9 * g.trace() / width as f64;
        for j in 0..width {
            g[(j, j)] += ridge;
        }
        let gram = g.cholesky();
        let caps: Vec<usize> = sets.iter().map(|s| side_cap(s.len(), eps)).collect();
        let margins: Vec<f64> = sets
            .iter()
            .zip(&caps)
            .map(|(s, &c)| (2 * c).saturating_sub(s.len() + 1) as f64)
            .collect();
        Ok(Problem {
            num_vars,
            degree,
            width,
            eps: eps.clone(),
            features,
            basis,
            chebyshev: chebyshev_table(degree),
            margins,
            snapping: eps.is_zero() || sets.iter().zip(&caps).any(|(s, &c)| 2 * c < s.len()),
            set_of,
            members,
            caps,
            normalized,
            center,
            scale,
            gram,
            unit_feature,
        })
    }

    /// Least-squares fit to a target that splits every set by a random
    /// direction through its median, so each set starts roughly bisected.
    fn fitted_start(&self, rng: &mut rng::Rng) -> Option<DVector<f64>> {
        let chol = self.gram.as_ref()?;
        let k = self.width;
        let d = self.num_vars;
        let mut target = vec![0.0; self.n()];
        for m in &self.members {
            let dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let proj: Vec<f64> = m
                .iter()
                .map(|&p| {
                    let row = &self.features[p * k..(p + 1) * k];
                    // the degree-one Chebyshev features are the coordinates
                    (0..d).map(|v| dir[v] * row[self.unit_feature[v]]).sum()
                })
                .collect();
            let mut sorted = proj.clone();
            sorted.sort_by(f64::total_cmp);
            let med = sorted[sorted.len() / 2];
            let spread = proj.iter().fold(1e-300f64, |acc, x| acc.max((x - med).abs()));
            for (&p, x) in m.iter().zip(&proj) {
                target[p] = (x - med) / spread;
            }
        }
        let mut rhs = DVector::zeros(k);
        for (p, t) in target.iter().enumerate() {
            let row = &self.features[p * k..(p + 1) * k];
            for j in 0..k {
                rhs[j] += row[j] * t;
            }
        }
        let a = chol.solve(&rhs);
        let norm = a.norm();
        (norm.is_finite() && norm > 0.0).then(|| a / norm)
    }

    fn n(&self) -> usize {
        self.set_of.len()
    }

    fn values(&self, a: &DVector<f64>) -> Vec<f64> {
        self.features
            .chunks_exact(self.width)
            .map(|row| row.iter().zip(a.iter()).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// Per-set smoothing widths: `tau` times the set's root mean square
    /// value, so each set is smoothed relative to its own scale.
    fn widths(&self, v: &[f64], tau: f64) -> Vec<f64> {
        self.members
            .iter()
            .map(|m| {
                let ms = m.iter().map(|&p| v[p] * v[p]).sum::<f64>() / m.len() as f64;
                (tau * ms.sqrt()).max(1e-300)
            })
            .collect()
    }

    fn loss(&self, v: &[f64], widths: &[f64]) -> f64 {
        let mut r = vec![0.0; self.members.len()];
        for (p, &x) in v.iter().enumerate() {
            let i = self.set_of[p];
            r[i] += (x / widths[i]).tanh();
        }
        r.iter()
            .zip(&self.margins)
            .map(|(x, m)| {
                let e = (x.abs() - m).max(0.0);
                e * e
            })
            .sum()
    }

    /// Exact monomial form, in normalised coordinates, of the polynomial
    /// with Chebyshev coefficients `coeffs`.
    fn expand(&self, coeffs: &[Rational]) -> MultiPoly {
        let mut acc: HashMap<Vec<u32>, Rational> = HashMap::new();
        for (e, c) in self.basis.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            // all monomials of T_{e_1}(u_1) ... T_{e_d}(u_d)
            let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), BigInt::one())];
            for &k in e.as_slice() {
                let t = &self.chebyshev[k as usize];
                let mut next = Vec::new();
                for (exps, coef) in &partial {
                    for (j, tj) in t.iter().enumerate() {
                        if tj.is_zero() {
                            continue;
                        }
                        let mut ex = exps.clone();
                        ex.push(j as u32);
                        next.push((ex, coef * tj));
                    }
                }
                partial = next;
            }
            for (ex, coef) in partial {
                *acc.entry(ex).or_insert_with(Rational::zero) += c * Rational::from_integer(coef);
            }
        }
        let mut terms: Vec<(Vec<u32>, Rational)> = acc.into_iter().collect();
        terms.sort();
        MultiPoly::from_terms(self.num_vars, terms)
            .expect("exponent arity")
            .with_max_degree(self.degree)
    }

    /// Exact values of the basis functions at normalised point `p`.
    fn exact_row(&self, p: usize) -> Vec<Rational> {
        let t: Vec<Vec<Rational>> = self.normalized[p]
            .coords()
            .iter()
            .map(|x| {
                let mut t = vec![Rational::one(), x.clone()];
                for k in 2..=self.degree as usize {
                    let next = Rational::from_integer(BigInt::from(2)) * x * &t[k - 1] - &t[k - 2];
                    t.push(next);
                }
                t
            })
            .collect();
        self.basis
            .iter()
            .map(|e| {
                e.as_slice()
                    .iter()
                    .enumerate()
                    .fold(Rational::one(), |acc, (i, &k)| acc * &t[i][k as usize])
            })
            .collect()
    }

    /// Float sign counts, treating `|v| <= tol` as undecided. Returns the
    /// total excess if undecided points all went to the wrong side.
    fn robust_excess(&self, v: &[f64], tol: f64) -> usize {
        let mut excess = 0;
        for (i, m) in self.members.iter().enumerate() {
            let (mut pos, mut neg, mut near) = (0usize, 0usize, 0usize);
            for &p in m {
                if v[p].abs() <= tol {
                    near += 1;
                } else if v[p] > 0.0 {
                    pos += 1;
                } else {
                    neg += 1;
                }
            }
            excess += (pos + near).saturating_sub(self.caps[i]) + (neg + near).saturating_sub(self.caps[i]);
        }
        excess
    }

    /// Points to force onto the zero set so every set meets its caps, taking
    /// the smallest values on each overfull side.
    fn snap_choice(&self, v: &[f64]) -> Vec<usize> {
        let mut chosen = Vec::new();
        for (i, m) in self.members.iter().enumerate() {
            let mut pos: Vec<usize> = m.iter().copied().filter(|&p| v[p] > 0.0).collect();
            let mut neg: Vec<usize> = m.iter().copied().filter(|&p| v[p] <= 0.0).collect();
            pos.sort_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(a.cmp(&b)));
            neg.sort_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(a.cmp(&b)));
            chosen.extend(pos.iter().take(pos.len().saturating_sub(self.caps[i])));
            chosen.extend(neg.iter().take(neg.len().saturating_sub(self.caps[i])));
        }
        chosen.sort_unstable();
        chosen
    }

    fn round(&self, a: &DVector<f64>) -> Vec<Rational> {
        let max = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let denom = BigInt::from(1u64 << 32);
        a.iter()
            .map(|x| {
                let scaled = (x / max * 4294967296.0).round();
                Rational::new(BigInt::from(scaled as i64), denom.clone())
            })
            .collect()
    }

    fn exact_passes(&self, coeffs: &[Rational]) -> bool {
        if coeffs.iter().all(|c| c.is_zero()) {
            return false;
        }
        let poly = self.expand(coeffs);
        if poly.is_zero() {
            return false;
        }
        let signs = signs_at_points(&poly, &self.normalized);
        self.members.iter().all(|m| {
            let s: Vec<i8> = m.iter().map(|&p| signs[p]).collect();
            counts_from_signs(&s, &self.eps).pass
        })
    }

    /// Exact minimal-norm correction of `coeffs` vanishing at `points`.
    fn snap(&self, coeffs: &[Rational], points: &[usize]) -> Option<Vec<Rational>> {
        let rows: Vec<Vec<Rational>> = points.iter().map(|&p| self.exact_row(p)).collect();
        let gram: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| {
                rows.iter()
                    .map(|s| r.iter().zip(s).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
                    .collect()
            })
            .collect();
        let rhs: Vec<Rational> = rows
            .iter()
            .map(|r| -r.iter().zip(coeffs).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
            .collect();
        let w = linalg::solve(&gram, &rhs)?;
        let mut out = coeffs.to_vec();
        for (r, wi) in rows.iter().zip(&w) {
            for (o, x) in out.iter_mut().zip(r) {
                *o += wi * x;
            }
        }
        Some(out)
    }

    fn to_original(&self, coeffs: &[Rational]) -> MultiPoly {
        let poly = self.expand(coeffs);
        let inv = Rational::one() / &self.scale;
        let scale = vec![inv.clone(); self.num_vars];
        let shift: Vec<Rational> = self.center.iter().map(|c| -(c * &inv)).collect();
        poly.substitute_affine(&scale, &shift)
    }

    fn run_restart(&self, restart: usize, seed: u64, config: &SearchConfig) -> Outcome {
        let mut rng = rng::stream(seed, "bisect-restart", restart as u64);
        let k = self.width;
        let n = self.n();
        let s = self.members.len();
        let mut a = match self.fitted_start(&mut rng) {
            Some(a) => a,
            None => {
                let mut a = DVector::from_fn(k, |_, _| rng.gen_range(-1.0..1.0));
                // balance the whole point set
                a[0] = 0.0;
                let v = self.values(&a);
                let mut sorted = v.clone();
                sorted.sort_by(f64::total_cmp);
                a[0] = -sorted[n / 2];
                a /= a.norm();
                a
            }
        };
        let mut v = self.values(&a);
        let mut tau: f64 = 1.0;
        let tau_min = 1e-3;
        let mut lambda: f64 = 1e-2;
        let mut stalled = 0;
        let mut trace = Vec::new();
        let mut best_excess = usize::MAX;
        let mut best_coeffs = self.round(&a);
        let mut since_progress = 0;
        let mut tried_snaps: HashSet<Vec<usize>> = HashSet::new();

        for it in 0..config.max_iterations {
            let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let tol = 1e-7 * vmax;
            let excess = self.robust_excess(&v, tol);
            if excess < best_excess {
                best_excess = excess;
                best_coeffs = self.round(&a);
                since_progress = 0;
            } else {
                since_progress += 1;
            }
            if excess == 0 {
                let coeffs = self.round(&a);
                if self.exact_passes(&coeffs) {
                    return Outcome {
                        restart,
                        result: Ok((coeffs, it)),
                        trace,
                    };
                }
            }
            let loose = self.robust_excess(&v, 0.0);
            let choice = self.snap_choice(&v);
            if self.snapping
                && !choice.is_empty()
                && choice.len() < k
                && choice.len() <= 16
                && loose <= 2 * s
                && !tried_snaps.contains(&choice)
            {
                tried_snaps.insert(choice.clone());
                let coeffs = self.round(&a);
                if let Some(snapped) = self.snap(&coeffs, &choice) {
                    if self.exact_passes(&snapped) {
                        return Outcome {
                            restart,
                            result: Ok((snapped, it)),
                            trace,
                        };
                    }
                }
            }
            if since_progress > config.patience {
                break;
            }

            // Residuals (soft imbalance beyond the margin) and leaky Jacobian.
            let widths = self.widths(&v, tau);
            let mut r: DVector<f64> = DVector::zeros(s);
            let mut jac: DMatrix<f64> = DMatrix::zeros(s, k);
            for p in 0..n {
                let i = self.set_of[p];
                let t = (v[p] / widths[i]).tanh();
                r[i] += t;
                let w = (1.0 - t * t).max(1e-3) / widths[i];
                let row = &self.features[p * k..(p + 1) * k];
                for (j, x) in row.iter().enumerate() {
                    jac[(i, j)] += w * x;
                }
            }
            for i in 0..s {
                let m = self.margins[i];
                if r[i].abs() <= m {
                    r[i] = 0.0;
                    jac.row_mut(i).fill(0.0);
                } else {
                    r[i] -= m * r[i].signum();
                }
            }
            let loss = r.norm_squared();
            if config.trace {
                trace.push(TraceRow {
                    restart,
                    iteration: it,
                    loss,
                    sigma: tau,
                });
            }
            if loss == 0.0 {
                // every set inside its margin at this width; sharpen
                tau = (tau * 0.5).max(tau_min);
                continue;
            }
            let jjt = &jac * jac.transpose();
            let mean_diag = (jjt.trace() / s as f64).max(1e-300);
            let mut accepted = false;
            for _ in 0..8 {
                let mut m = jjt.clone();
                for i in 0..s {
                    m[(i, i)] += lambda * mean_diag;
                }
                let Some(chol) = m.cholesky() else {
                    lambda *= 10.0;
                    continue;
                };
                let y = chol.solve(&(-&r));
                let step = jac.transpose() * y;
                let mut trial = &a + step;
                let norm = trial.norm();
                if !norm.is_finite() || norm == 0.0 {
                    lambda *= 10.0;
                    continue;
                }
                trial /= norm;
                let tv = self.values(&trial);
                if self.loss(&tv, &widths) < loss {
                    a = trial;
                    v = tv;
                    lambda = (lambda / 3.0).max(1e-9);
                    accepted = true;
                    break;
                }
                lambda *= 4.0;
            }
            if accepted {
                tau = (tau * 0.9).max(tau_min);
                stalled = 0;
            } else {
                lambda = lambda.min(1e6);
                tau = (tau * 0.5).max(tau_min);
                stalled += 1;
                if stalled > 20 {
                    // reheat
                    tau = 0.5;
                    lambda = 1e-2;
                    stalled = 0;
                }
            }
        }
        Outcome {
            restart,
            result: Err((best_excess, best_coeffs)),
            trace,
        }
    }
}

/// Monomial coefficients of the Chebyshev polynomials `T_0..=T_degree`.
fn chebyshev_table(degree: u32) -> Vec<Vec<BigInt>> {
    let mut t: Vec<Vec<BigInt>> = vec![vec![BigInt::one()], vec![BigInt::zero(), BigInt::one()]];
    for k in 2..=degree as usize {
        let mut next = vec![BigInt::zero(); k + 1];
        for (j, c) in t[k - 1].iter().enumerate() {
            next[j + 1] += c * 2;
        }
        for (j, c) in t[k - 2].iter().enumerate() {
            next[j] -= c;
        }
        t.push(next);
    }
    t.truncate(degree as usize + 1);
    t
}

/// Dyadic centre and power-of-two scale mapping the points into roughly
/// `[-1, 1]^d`.
fn normalization<'a>(points: impl Iterator<Item = &'a Point>, d: usize) -> (Vec<Rational>, Rational) {
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in points {
        for (i, c) in p.coords().iter().enumerate() {
            let x = to_f64(c);
            lo[i] = lo[i].min(x);
            hi[i] = hi[i].max(x);
        }
    }
    let half = (0..d).map(|i| (hi[i] - lo[i]) / 2.0).fold(0.0f64, f64::max);
    let exp = if half > 0.0 { half.log2().ceil() as i32 } else { 0 };
    let scale = pow2(exp);
    let scale_f = 2f64.powi(exp);
    let center = (0..d)
        .map(|i| {
            let mid = (lo[i] + hi[i]) / 2.0;
            // multiple of scale / 1024
            let steps = (mid / scale_f * 1024.0).round();
            Rational::from_integer(BigInt::from(steps as i64)) * &scale / Rational::from_integer(BigInt::from(1024))
        })
        .collect();
    (center, scale)
}

fn pow2(exp: i32) -> Rational {
    let two = BigInt::from(2);
    if exp >= 0 {
        Rational::from_integer(num_traits::pow(two, exp as usize))
    } else {
        Rational::new(BigInt::one(), num_traits::pow(two, (-exp) as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn pts(v: &[(i64, i64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::from_ints(&[x, y])).collect()
    }

    #[test]
    fn collinear_triple_exact() {
        let sets = vec![pts(&[(0, 0), (1, 0), (2, 0)])];
        let b = find_bisecting_polynomial(&sets, 1, &rat(0, 1), 1).unwrap();
        assert!(b.certificate.passes());
        assert_eq!(b.certificate.sets[0].zero, 1);
        assert!(b.poly.degree() <= 1);
    }

    #[test]
    fn two_pairs_exact() {
        let sets = vec![pts(&[(0, 0), (2, 0)]), pts(&[(0, 2), (2, 2)])];
        let b = find_bisecting_polynomial(&sets, 1, &rat(0, 1), 3).unwrap();
        assert!(verify_bisection(&b.poly, &sets, &rat(0, 1)).passes());
    }

    #[test]
    fn rejects_bad_input() {
        let sets = vec![pts(&[(0, 0)]), pts(&[(1, 1)]), pts(&[(2, 0)])];
        assert!(matches!(
            find_bisecting_polynomial(&sets, 1, &rat(0, 1), 0),
            Err(Error::InvalidParameter(_))
        ));
        let sets = vec![pts(&[(0, 0)]), vec![]];
        assert!(find_bisecting_polynomial(&sets, 2, &rat(0, 1), 0).is_err());
    }

    #[test]
    fn deterministic_for_seed() {
        let sets = vec![
            pts(&[(0, 0), (5, 1), (3, 7), (2, 2), (9, 4)]),
            pts(&[(1, 8), (4, 4), (6, 0), (7, 7)]),
        ];
        let a = find_bisecting_polynomial(&sets, 1, &rat(1, 20), 11).unwrap();
        let b = find_bisecting_polynomial(&sets, 1, &rat(1, 20), 11).unwrap();
        assert_eq!(a.poly, b.poly);
        assert_eq!(a.restart, b.restart);
    }

    #[test]
    fn chebyshev_expansion_is_exact() {
        let t = chebyshev_table(4);
        assert_eq!(t[4], [1, 0, -8, 0, 8].iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>());
        let sets = vec![pts(&[(0, 0), (3, 1), (1, 4), (5, 5)])];
        let problem = Problem::new(&sets, 3, &rat(0, 1)).unwrap();
        let coeffs: Vec<Rational> = (0..problem.width as i64).map(|i| rat(i * i - 7, i + 1)).collect();
        let poly = problem.expand(&coeffs);
        for p in 0..4 {
            let row = problem.exact_row(p);
            let direct = row.iter().zip(&coeffs).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
            assert_eq!(poly.eval_point(&problem.normalized[p]).unwrap(), direct);
        }
    }

    #[test]
    fn normalization_is_dyadic() {
        let p = pts(&[(-10, 4), (30, 6)]);
        let (c, s) = normalization(p.iter(), 2);
        assert_eq!(s, rat(32, 1));
        assert_eq!(c[0], rat(10, 1));
        assert_eq!(c[1], rat(5, 1));
    }
}
