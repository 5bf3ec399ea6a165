//! Exponent tuples and the global monomial order.
//!
//! Order: ascending total degree, then descending exponent of the first
//! variable, then of the second, and so on. For two variables and degree two
//! this gives `1, x, y, x^2, xy, y^2`.

use std::cmp::Ordering;


#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponents(Vec<u32>);

impl Exponents {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponents(exps)
    }

    pub fn zero(num_vars: usize) -> Self {
        Exponents(vec![0; num_vars])
    }

    /// The exponent tuple of the `var`-th coordinate function.
    pub fn unit(num_vars: usize, var: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[var] = 1;
        Exponents(e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn add(&self, other: &Exponents) -> Exponents {
        Exponents(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Exponents {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// All exponent tuples in `num_vars` variables of total degree at most
/// `max_degree`, in the global order (constant monomial first).
pub fn monomials(num_vars: usize, max_degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        let mut cur = vec![0u32; num_vars];
        fill_degree(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill_degree(cur: &mut Vec<u32>, var: usize, remaining: u32, out: &mut Vec<Exponents>) {
    if var + 1 == cur.len() {
        cur[var] = remaining;
        out.push(Exponents(cur.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[var] = e;
        fill_degree(cur, var + 1, remaining - e, out);
    }
    cur[var] = 0;
}

/// Number of nonconstant monomials of degree at most `max_degree` in
/// `num_vars` variables: `binom(D + d, d) - 1`.
pub fn monomial_count(num_vars: usize, max_degree: u32) -> usize {
    let mut acc: u128 = 1;
    let d = num_vars as u128;
    for i in 1..=d {
        acc = acc * (max_degree as u128 + i) / i;
    }
    (acc - 1) as usize
}
