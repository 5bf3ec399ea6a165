//! Incidences between points and lines or bounded-degree curves.
//!
//! Counting is brute force over all pairs with exact evaluation. The audits
//! recompute every quantity in the partition-based incidence bounds and
//! check each inequality exactly.

mod curves;
mod lines;

pub use curves::{
    audit_curve_bounds, count_incidences_curves, generate_circle_instance, generate_conic_instance, CurveSet,
};
pub use lines::{
    audit_szemeredi_trotter, audit_szemeredi_trotter_with, count_incidences_lines, dual_incidence_count,
    generate_extremal_grid, generate_random_line_instance, random_lines_near, st_bound_ratio, LineSet, StAuditConfig,
};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{from_f64, Rational};

/// A rational `q <= x^(1/3)` within a relative `2^-50` of the true cube root;
/// exact when `x` is a perfect cube.
pub(crate) fn cube_root_lower(x: &BigInt) -> Rational {
    let r = x.cbrt();
    if &(&r * &r * &r) == x {
        return Rational::from_integer(r);
    }
    let xr = Rational::from_integer(x.clone());
    let mut q = from_f64(crate::algebra::to_f64(&xr).cbrt());
    let shrink = Rational::one() - Rational::new(BigInt::one(), BigInt::one() << 50);
    while &q * &q * &q > xr {
        q *= &shrink;
    }
    q
}

/// Rational approximation of a positive real, rounded to a multiple of
/// `1/1024`.
pub(crate) fn dyadic_approx(x: f64) -> Rational {
    let q = from_f64((x * 1024.0).round() / 1024.0);
    if q.is_zero() {
        Rational::new(BigInt::one(), BigInt::from(1024))
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;

    #[test]
    fn cube_roots() {
        assert_eq!(cube_root_lower(&BigInt::from(27)), int(3));
        assert_eq!(cube_root_lower(&BigInt::from(1)), int(1));
        let q = cube_root_lower(&BigInt::from(2));
        assert!(&q * &q * &q <= int(2));
        assert!((crate::algebra::to_f64(&q) - 2f64.cbrt()).abs() < 1e-12);
    }
}
