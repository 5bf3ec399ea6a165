//! Integer-coefficient polynomials backing the exact hot paths.
//!
//! Rational polynomials are scaled by a positive integer to primitive integer
//! form, which leaves every sign unchanged. Sturm sequences use signed
//! primitive pseudo-remainders so no rational reduction happens inside the
//! remainder loop.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MultiPoly, Rational};
use crate::geometry::sign_of_int;

fn lcm_of_denominators<'a>(it: impl Iterator<Item = &'a Rational>) -> BigInt {
    it.fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Dense integer polynomial, lowest degree first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntUniPoly {
    pub coeffs: Vec<BigInt>,
}

impl IntUniPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntUniPoly { coeffs }
    }

    /// Primitive integer multiple of a rational coefficient list.
    pub fn from_rational(coeffs: &[Rational]) -> Self {
        let l = lcm_of_denominators(coeffs.iter());
        IntUniPoly::new(coeffs.iter().map(|c| c.numer() * (&l / c.denom())).collect()).primitive()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn lc(&self) -> &BigInt {
        self.coeffs.last().expect("nonzero polynomial")
    }

    /// Divides out the (positive) gcd of the coefficients.
    pub fn primitive(mut self) -> Self {
        let g = self
            .coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for c in &mut self.coeffs {
                *c /= &g;
            }
        }
        self
    }

    pub fn derivative(&self) -> Self {
        IntUniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Sign of the polynomial at the rational `x`, evaluated in homogenised
    /// integer form.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let p = x.numer();
        let q = x.denom();
        let n = self.degree();
        // Horner in (p, q): sum c_i p^i q^(n-i)
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for (idx, c) in self.coeffs.iter().enumerate().rev() {
            if idx == n {
                acc = c.clone();
            } else {
                qpow *= q;
                acc = acc * p + c * &qpow;
            }
        }
        sign_of_int(&acc)
    }

    pub fn sign_at_int(&self, x: &BigInt) -> i8 {
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c);
        sign_of_int(&v)
    }

    fn sign_at_infinity(&self, negative: bool) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let s = sign_of_int(self.lc());
        if negative && self.degree() % 2 == 1 {
            -s
        } else {
            s
        }
    }

    /// Pseudo-division: returns `(q, r, m)` with `m * self = q * divisor + r`
    /// where `m = lc(divisor)^(deg self - deg divisor + 1)`.
    fn pseudo_divide(&self, divisor: &IntUniPoly) -> (IntUniPoly, IntUniPoly, BigInt) {
        let n = divisor.degree();
        let lb = divisor.lc().clone();
        if self.is_zero() || self.degree() < n {
            return (IntUniPoly::default(), self.clone(), BigInt::one());
        }
        let m = self.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); m - n + 1];
        let mut steps = 0u32;
        while r.len() > n && !r.is_empty() {
            let k = r.len() - 1 - n;
            let s = r.last().unwrap().clone();
            for c in &mut q {
                *c *= &lb;
            }
            q[k] += &s;
            for c in r.iter_mut() {
                *c *= &lb;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                r[j + k] -= &s * b;
            }
            debug_assert!(r.last().unwrap().is_zero());
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps += 1;
        }
        let total = (m - n + 1) as u32;
        let extra = num_traits::pow(lb.clone(), (total - steps) as usize);
        if !extra.is_one() {
            for c in r.iter_mut() {
                *c *= &extra;
            }
            for c in q.iter_mut() {
                *c *= &extra;
            }
        }
        let mult = num_traits::pow(lb, total as usize);
        (IntUniPoly::new(q), IntUniPoly::new(r), mult)
    }

    /// Greatest common divisor up to a constant factor (primitive, positive
    /// leading coefficient).
    pub fn gcd(&self, other: &IntUniPoly) -> IntUniPoly {
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.clone().primitive(), other.clone().primitive())
        } else {
            (other.clone().primitive(), self.clone().primitive())
        };
        if a.is_zero() {
            return b.normalized();
        }
        while !b.is_zero() {
            let (_, r, _) = a.pseudo_divide(&b);
            a = b;
            b = r.primitive();
        }
        a.normalized()
    }

    /// Same polynomial scaled to a positive leading coefficient.
    fn normalized(self) -> Self {
        if !self.is_zero() && self.lc().is_negative() {
            IntUniPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
        } else {
            self
        }
    }

    /// Product of the distinct irreducible factors (up to a constant).
    pub fn square_free(&self) -> IntUniPoly {
        if self.degree() <= 1 {
            return self.clone().primitive().normalized();
        }
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.clone().primitive().normalized();
        }
        let (q, r, _) = self.pseudo_divide(&g);
        debug_assert!(r.is_zero());
        q.primitive().normalized()
    }

    /// Sign variations in the coefficients of `(1 + u)^n g(1 / (1 + u))`;
    /// zero means no root in `(0, 1)`, one means exactly one.
    pub fn unit_interval_variations(&self) -> usize {
        let mut c: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let n = c.len();
        // Taylor shift u -> u + 1
        for i in 0..n.saturating_sub(1) {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].clone();
                c[j] += t;
            }
        }
        count_variations(c.iter().map(sign_of_int))
    }

    /// Multiplies two polynomials.
    pub fn mul(&self, other: &IntUniPoly) -> IntUniPoly {
        if self.is_zero() || other.is_zero() {
            return IntUniPoly::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntUniPoly::new(out)
    }
}

fn count_variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sturm sequence of the square-free part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    original: IntUniPoly,
    chain: Vec<IntUniPoly>,
}

impl SturmChain {
    pub fn new(p: &IntUniPoly) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let sf = p.square_free();
        let mut chain = vec![sf.clone()];
        let d = sf.derivative();
        if !d.is_zero() {
            chain.push(d.primitive());
            loop {
                let n = chain.len();
                let (_, r, mult) = chain[n - 2].pseudo_divide(&chain[n - 1]);
                if r.is_zero() {
                    break;
                }
                // next = -rem up to a positive factor
                let flip = !mult.is_negative();
                let r = r.primitive();
                let next = if flip {
                    IntUniPoly::new(r.coeffs.into_iter().map(|c| -c).collect())
                } else {
                    r
                };
                chain.push(next);
            }
        }
        SturmChain {
            original: p.clone(),
            chain,
        }
    }

    pub fn square_free_part(&self) -> &IntUniPoly {
        &self.chain[0]
    }

    pub fn variations(&self, x: &Rational) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self, negative: bool) -> usize {
        count_variations(self.chain.iter().map(|p| p.sign_at_infinity(negative)))
    }

    /// Distinct roots in `(a, b]`.
    pub fn count_half_open(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a) - self.variations(b)
    }

    pub fn count_in_interval(&self, a: &Rational, b: &Rational, open: bool) -> usize {
        let half = self.count_half_open(a, b);
        if open {
            half - usize::from(self.original.sign_at(b) == 0)
        } else {
            half + usize::from(self.original.sign_at(a) == 0)
        }
    }

    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(true) - self.variations_at_infinity(false)
    }

    /// Isolating intervals for all real roots, in increasing order.
    pub fn isolate(&self) -> Vec<RootInterval> {
        let total = self.count_all();
        let mut out = Vec::with_capacity(total);
        if total == 0 {
            return out;
        }
        let sf = &self.chain[0];
        let bound = cauchy_bound(sf);
        let lo = -bound.clone();
        let hi = bound;
        let vlo = self.variations(&lo);
        let vhi = self.variations(&hi);
        self.isolate_rec(lo, hi, vlo, vhi, &mut out);
        out
    }

    fn isolate_rec(
        &self,
        lo: Rational,
        hi: Rational,
        vlo: usize,
        vhi: usize,
        out: &mut Vec<RootInterval>,
    ) {
        // lo and hi are never roots here; count is roots in (lo, hi)
        let count = vlo - vhi;
        if count == 0 {
            return;
        }
        if count == 1 {
            out.push(RootInterval { lo, hi });
            return;
        }
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        let vmid = self.variations(&mid);
        if self.chain[0].sign_at(&mid) == 0 {
            // roots in (lo, mid) = vlo - vmid - 1; pick a split just left of mid
            let left = vlo - vmid - 1;
            if left > 0 {
                self.isolate_left_of_exact(lo, mid.clone(), vlo, out);
            }
            out.push(RootInterval {
                lo: mid.clone(),
                hi: mid.clone(),
            });
            if vmid > vhi {
                self.isolate_right_of_exact(mid, hi, vhi, out);
            }
        } else {
            self.isolate_rec(lo, mid.clone(), vlo, vmid, out);
            self.isolate_rec(mid, hi, vmid, vhi, out);
        }
    }

    /// Isolates roots in `(lo, root)` where `root` is an exact root.
    fn isolate_left_of_exact(
        &self,
        lo: Rational,
        root: Rational,
        vlo: usize,
        out: &mut Vec<RootInterval>,
    ) {
        // Move a probe toward `root` until no other root lies in (probe, root].
        let two = Rational::from_integer(BigInt::from(2));
        let vroot = self.variations(&root);
        let mut probe = (&lo + &root) / &two;
        loop {
            if self.chain[0].sign_at(&probe) != 0 {
                let vprobe = self.variations(&probe);
                // roots in (probe, root] = vprobe - vroot, which includes root
                if vprobe - vroot == 1 {
                    self.isolate_rec(lo, probe, vlo, vprobe, out);
                    return;
                }
            }
            probe = (&probe + &root) / &two;
        }
    }

    /// Isolates roots in `(root, hi)` where `root` is an exact root.
    fn isolate_right_of_exact(
        &self,
        root: Rational,
        hi: Rational,
        vhi: usize,
        out: &mut Vec<RootInterval>,
    ) {
        let two = Rational::from_integer(BigInt::from(2));
        let vroot = self.variations(&root);
        let mut probe = (&root + &hi) / &two;
        loop {
            if self.chain[0].sign_at(&probe) != 0 {
                let vprobe = self.variations(&probe);
                if vroot == vprobe {
                    self.isolate_rec(probe, hi, vprobe, vhi, out);
                    return;
                }
            }
            probe = (&probe + &root) / &two;
        }
    }
}

/// An isolating interval: `lo == hi` marks an exact rational root; otherwise
/// the open interval `(lo, hi)` holds exactly one root and neither endpoint
/// is a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

fn cauchy_bound(p: &IntUniPoly) -> Rational {
    let lc = p.lc().abs();
    let max = p.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default();
    // 1 + max|c_i| / |c_n|, rounded up to an integer
    let (q, r) = max.div_rem(&lc);
    let q = if r.is_zero() { q } else { q + 1 };
    Rational::from_integer(q + 1)
}

/// Primitive integer form of a multivariate polynomial, with terms kept in
/// lexicographic exponent order for nested evaluation.
#[derive(Clone, Debug)]
pub struct IntMultiPoly {
    num_vars: usize,
    degree: u32,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl IntMultiPoly {
    pub fn from_rational(p: &MultiPoly) -> Self {
        let l = lcm_of_denominators(p.terms().map(|(_, c)| c));
        let mut terms: Vec<(Vec<u32>, BigInt)> = p
            .terms()
            .map(|(e, c)| (e.as_slice().to_vec(), c.numer() * (&l / c.denom())))
            .collect();
        let g = terms.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
        if !g.is_zero() && !g.is_one() {
            for (_, c) in &mut terms {
                *c /= &g;
            }
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        IntMultiPoly {
            num_vars: p.num_vars(),
            degree: p.degree(),
            terms,
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `den^deg * f(nums / den)`, an integer with the sign of `f` at the point.
    pub fn eval_scaled(&self, nums: &[BigInt], den: &BigInt) -> BigInt {
        debug_assert_eq!(nums.len(), self.num_vars);
        let deg = self.degree as usize;
        let den_pows = powers(den, deg);
        let pows: Vec<Vec<BigInt>> = nums.iter().map(|x| powers(x, deg)).collect();
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut term = c * &den_pows[deg - e.iter().sum::<u32>() as usize];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= &pows[i][k as usize];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn sign_at(&self, nums: &[BigInt], den: &BigInt) -> i8 {
        sign_of_int(&self.eval_scaled(nums, den))
    }

    /// Restriction to the line `t -> (start + t * dir) / den`, scaled by
    /// `den^deg` (a positive factor).
    pub fn restrict(&self, start: &[BigInt], dir: &[BigInt], den: &BigInt) -> IntUniPoly {
        let deg = self.degree as usize;
        if self.terms.is_empty() {
            return IntUniPoly::default();
        }
        let den_pows = powers(den, deg);
        let lin_pows: Vec<Vec<IntUniPoly>> = start
            .iter()
            .zip(dir)
            .map(|(s, v)| {
                let lin = IntUniPoly::new(vec![s.clone(), v.clone()]);
                let mut pw = vec![IntUniPoly::new(vec![BigInt::one()])];
                for k in 1..=deg {
                    let next = pw[k - 1].mul(&lin);
                    pw.push(next);
                }
                pw
            })
            .collect();
        let coeffs = self.restrict_rec(&self.terms, 0, &lin_pows, &den_pows, deg);
        IntUniPoly::new(coeffs)
    }

    fn restrict_rec(
        &self,
        terms: &[(Vec<u32>, BigInt)],
        var: usize,
        lin_pows: &[Vec<IntUniPoly>],
        den_pows: &[BigInt],
        deg: usize,
    ) -> Vec<BigInt> {
        let mut acc: Vec<BigInt> = Vec::new();
        let mut start = 0;
        while start < terms.len() {
            let k = terms[start].0[var];
            let mut end = start;
            while end < terms.len() && terms[end].0[var] == k {
                end += 1;
            }
            let group = &terms[start..end];
            let inner: Vec<BigInt> = if var + 1 == self.num_vars {
                // single term with this exponent in the last variable
                debug_assert_eq!(group.len(), 1);
                let (e, c) = &group[0];
                let total: u32 = e.iter().sum();
                vec![c * &den_pows[deg - total as usize]]
            } else {
                self.restrict_rec(group, var + 1, lin_pows, den_pows, deg)
            };
            let pw = &lin_pows[var][k as usize];
            add_product(&mut acc, &inner, &pw.coeffs);
            start = end;
        }
        acc
    }
}

fn powers(x: &BigInt, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigInt::one());
    for k in 1..=n {
        let next = &out[k - 1] * x;
        out.push(next);
    }
    out
}

/// `acc += a * b` on dense coefficient vectors.
fn add_product(acc: &mut Vec<BigInt>, a: &[BigInt], b: &[BigInt]) {
    if a.is_empty() || b.is_empty() {
        return;
    }
    let n = a.len() + b.len() - 1;
    if acc.len() < n {
        acc.resize(n, BigInt::zero());
    }
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            acc[i + j] += x * y;
        }
    }
}
