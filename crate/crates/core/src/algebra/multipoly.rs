//! Multivariate polynomials with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::intpoly::IntMultiPoly;
use super::monomial::{monomials, Exponents};
use super::unipoly::UniPoly;
use super::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// A `d`-variate polynomial of total degree at most `max_degree`, stored as a
/// map from exponent tuples to nonzero coefficients. Iteration follows the
/// global monomial order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    max_degree: u32,
    coeffs: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize, max_degree: u32) -> Self {
        assert!(num_vars >= 1, "polynomials need at least one variable");
        MultiPoly {
            num_vars,
            max_degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(num_vars, 0);
        p.add_term(Exponents::zero(num_vars), c);
        p
    }

    /// The coordinate function `x_var`.
    pub fn var(num_vars: usize, var: usize) -> Self {
        assert!(var < num_vars);
        let mut p = MultiPoly::zero(num_vars, 1);
        p.add_term(Exponents::unit(num_vars, var), Rational::one());
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed. `max_degree` becomes the actual degree.
    pub fn from_terms<I>(num_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = MultiPoly::zero(num_vars, 0);
        for (exps, c) in terms {
            if exps.len() != num_vars {
                return Err(Error::DimensionMismatch {
                    expected: num_vars,
                    got: exps.len(),
                });
            }
            let e = Exponents::new(exps);
            p.max_degree = p.max_degree.max(e.total_degree());
            p.add_term(e, c);
        }
        p.max_degree = p.degree();
        Ok(p)
    }

    /// Coefficients listed in the global monomial order over all monomials
    /// of degree at most `max_degree` (constant first).
    pub fn from_coeff_vector(num_vars: usize, max_degree: u32, coeffs: &[Rational]) -> Self {
        let basis = monomials(num_vars, max_degree);
        assert_eq!(basis.len(), coeffs.len(), "coefficient vector length");
        let mut p = MultiPoly::zero(num_vars, max_degree);
        for (e, c) in basis.into_iter().zip(coeffs) {
            p.add_term(e, c.clone());
        }
        p
    }

    pub fn coeff_vector(&self) -> Vec<Rational> {
        monomials(self.num_vars, self.max_degree)
            .iter()
            .map(|e| self.coeff(e))
            .collect()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        debug_assert!(e.total_degree() <= self.max_degree);
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    /// Nominal degree bound; every stored term has degree at most this.
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Largest total degree of a nonzero term (0 for the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.coeffs
            .keys()
            .next_back()
            .map(|e| e.total_degree())
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: &Exponents) -> Rational {
        self.coeffs.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Same polynomial with a larger nominal degree bound.
    pub fn with_max_degree(mut self, max_degree: u32) -> Self {
        assert!(max_degree >= self.degree());
        self.max_degree = max_degree;
        self
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = MultiPoly::zero(self.num_vars, self.max_degree);
        if c.is_zero() {
            return out;
        }
        out.coeffs = self.coeffs.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        out
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let deg = self.degree() as usize;
        let powers: Vec<Vec<Rational>> = x
            .iter()
            .map(|xi| {
                let mut pw = Vec::with_capacity(deg + 1);
                pw.push(Rational::one());
                for k in 1..=deg {
                    let next = &pw[k - 1] * xi;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = Rational::zero();
        for (e, c) in &self.coeffs {
            let mut term = c.clone();
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    term *= &powers[i][k as usize];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    pub fn eval_point(&self, p: &Point) -> Result<Rational> {
        self.eval(p.coords())
    }

    /// Restriction to the line through `p` and `q`, parametrised so that
    /// `t = 0` is `p` and `t = 1` is `q`.
    pub fn restrict_to_segment(&self, p: &Point, q: &Point) -> Result<UniPoly> {
        p.check_dim(self.num_vars)?;
        q.check_dim(self.num_vars)?;
        if p == q {
            return Err(Error::DegenerateSegment);
        }
        let deg = self.degree() as usize;
        let powers: Vec<Vec<UniPoly>> = p
            .coords()
            .iter()
            .zip(q.coords())
            .map(|(a, b)| {
                let lin = UniPoly::new(vec![a.clone(), b - a]);
                let mut pw = Vec::with_capacity(deg + 1);
                pw.push(UniPoly::constant(Rational::one()));
                for k in 1..=deg {
                    let next = &pw[k - 1] * &lin;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = UniPoly::zero();
        for (e, c) in &self.coeffs {
            let mut term = UniPoly::constant(c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitutes `x_i -> scale[i] * x_i + shift[i]` in every variable.
    pub fn substitute_affine(&self, scale: &[Rational], shift: &[Rational]) -> Self {
        assert_eq!(scale.len(), self.num_vars);
        assert_eq!(shift.len(), self.num_vars);
        let deg = self.degree();
        let lin: Vec<MultiPoly> = (0..self.num_vars)
            .map(|i| {
                &MultiPoly::var(self.num_vars, i).scale(&scale[i])
                    + &MultiPoly::constant(self.num_vars, shift[i].clone())
            })
            .collect();
        let powers: Vec<Vec<MultiPoly>> = lin
            .iter()
            .map(|l| {
                let mut pw = vec![MultiPoly::constant(self.num_vars, Rational::one())];
                for k in 1..=deg as usize {
                    let next = &pw[k - 1] * l;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut out = MultiPoly::zero(self.num_vars, self.max_degree);
        for (e, c) in &self.coeffs {
            let mut term = MultiPoly::constant(self.num_vars, c.clone());
            for (i, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    term = &term * &powers[i][k as usize];
                }
            }
            for (te, tc) in term.coeffs {
                out.add_term(te, tc);
            }
        }
        out
    }

    /// Integer multiple of `self` with coprime integer coefficients and the
    /// same sign everywhere.
    pub fn to_int(&self) -> IntMultiPoly {
        IntMultiPoly::from_rational(self)
    }

    /// One `e1 e2 ... ed : num/den` line per nonzero term, in the global
    /// monomial order.
    pub fn to_fixture(&self) -> String {
        let mut out = String::new();
        for (e, c) in &self.coeffs {
            let exps: Vec<String> = e.as_slice().iter().map(|k| k.to_string()).collect();
            out.push_str(&exps.join(" "));
            out.push_str(" : ");
            out.push_str(&format_rational(c));
            out.push('\n');
        }
        out
    }

    /// Parses the fixture format. Term order on input is irrelevant; blank
    /// lines and `#` comments are skipped.
    pub fn parse_fixture(num_vars: usize, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lhs, rhs) = line
                .split_once(':')
                .ok_or_else(|| Error::parse(format!("missing ':' in term {line:?}")))?;
            let exps: Vec<u32> = lhs
                .split_whitespace()
                .map(|s| {
                    s.parse()
                        .map_err(|_| Error::parse(format!("bad exponent {s:?}")))
                })
                .collect::<Result<_>>()?;
            terms.push((exps, parse_rational(rhs)?));
        }
        MultiPoly::from_terms(num_vars, terms)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        const NAMES: [&str; 4] = ["x", "y", "z", "w"];
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", format_rational(c))?;
            for (i, &k) in e.as_slice().iter().enumerate() {
                let name = NAMES.get(i).map(|s| s.to_string()).unwrap_or(format!("x{i}"));
                match k {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{k}")?,
                }
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = self.clone();
        out.max_degree = self.max_degree.max(rhs.max_degree);
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self + &(-rhs)
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut out = self.clone();
        for v in out.coeffs.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.num_vars, rhs.num_vars);
        let mut out = MultiPoly::zero(self.num_vars, self.max_degree + rhs.max_degree);
        let mut acc: BTreeMap<Exponents, Rational> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            for (eb, cb) in &rhs.coeffs {
                *acc.entry(ea.add(eb)).or_insert_with(Rational::zero) += ca * cb;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        out.coeffs = acc;
        out
    }
}

impl MultiPoly {
    /// Sign of `self` at `x` (-1, 0 or +1).
    pub fn sign_at(&self, x: &[Rational]) -> Result<i8> {
        let v = self.eval(x)?;
        Ok(if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat};

    pub(crate) fn circle() -> MultiPoly {
        MultiPoly::from_terms(
            2,
            vec![
                (vec![2, 0], int(1)),
                (vec![0, 2], int(1)),
                (vec![0, 0], int(-1)),
            ],
        )
        .unwrap()
    }

    fn xy() -> MultiPoly {
        MultiPoly::from_terms(2, vec![(vec![1, 1], int(1))]).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(circle().eval(&[int(0), int(0)]).unwrap(), int(-1));
        assert_eq!(xy().eval(&[int(2), int(3)]).unwrap(), int(6));
        assert_eq!(MultiPoly::zero(2, 3).eval(&[rat(1, 3), int(7)]).unwrap(), int(0));
    }

    #[test]
    fn eval_dimension_mismatch() {
        assert!(matches!(
            circle().eval(&[int(1)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn restrict_examples() {
        let g = circle()
            .restrict_to_segment(&Point::from_ints(&[0, 0]), &Point::from_ints(&[2, 0]))
            .unwrap();
        assert_eq!(g, UniPoly::new(vec![int(-1), int(0), int(4)]));

        let x = MultiPoly::var(2, 0);
        let g = x
            .restrict_to_segment(&Point::from_ints(&[-1, 0]), &Point::from_ints(&[1, 0]))
            .unwrap();
        assert_eq!(g, UniPoly::new(vec![int(-1), int(2)]));

        let y = MultiPoly::var(2, 1);
        let g = y
            .restrict_to_segment(&Point::from_ints(&[0, 5]), &Point::from_ints(&[1, 5]))
            .unwrap();
        assert_eq!(g, UniPoly::new(vec![int(5)]));
    }

    #[test]
    fn restrict_rejects_degenerate_segment() {
        let p = Point::from_ints(&[1, 1]);
        assert!(matches!(
            circle().restrict_to_segment(&p, &p),
            Err(Error::DegenerateSegment)
        ));
    }

    #[test]
    fn degree_and_zero() {
        assert_eq!(circle().degree(), 2);
        let diff = &circle() - &circle();
        assert!(diff.is_zero());
        assert_eq!(diff.degree(), 0);
        assert!(diff.terms().next().is_none());
    }

    #[test]
    fn fixture_roundtrip_is_canonical() {
        let text = "0 2 : 1\n0 0 : -1\n2 0 : 1\n";
        let p = MultiPoly::parse_fixture(2, text).unwrap();
        assert_eq!(p, circle());
        assert_eq!(p.to_fixture(), "0 0 : -1\n2 0 : 1\n0 2 : 1\n");
        assert!(MultiPoly::parse_fixture(2, "1 0 1 : 3\n").is_err());
        assert!(MultiPoly::parse_fixture(2, "1 0 3\n").is_err());
    }

    #[test]
    fn affine_substitution() {
        // circle(2x - 1, y / 2) evaluated at (1/2, 2) equals circle(0, 1) = 0
        let s = circle().substitute_affine(&[int(2), rat(1, 2)], &[int(-1), int(0)]);
        assert_eq!(s.eval(&[rat(1, 2), int(2)]).unwrap(), int(0));
        assert_eq!(
            s.eval(&[int(3), int(5)]).unwrap(),
            circle().eval(&[int(5), rat(5, 2)]).unwrap()
        );
    }

    #[test]
    fn coeff_vector_roundtrip() {
        let c = circle().with_max_degree(3);
        let v = c.coeff_vector();
        assert_eq!(v.len(), 10);
        assert_eq!(MultiPoly::from_coeff_vector(2, 3, &v), c);
    }
}
