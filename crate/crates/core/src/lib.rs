//! Polynomial partitioning of finite point sets.
//!
//! The crate builds partitioning polynomials as products of verified
//! bisecting polynomials, and uses them for point-line and point-curve
//! incidence decompositions and for spanning trees with low crossing number.
//! Every predicate is evaluated in exact rational arithmetic; floating point
//! appears only inside the bisector search, whose output is rounded and then
//! verified exactly.

pub mod algebra;
pub mod audit;
pub mod error;
pub mod geometry;
pub mod hamsandwich;
pub mod incidence;
pub mod io;
pub mod linalg;
pub mod partition;
pub mod rng;
pub mod spantree;

pub use algebra::{monomial_count, MultiPoly, Rational, UniPoly};
pub use audit::{AuditEntry, AuditReport};
pub use error::{Error, Result};
pub use geometry::Point;
pub use hamsandwich::{find_bisecting_polynomial, verify_bisection, BisectionCertificate};
pub use partition::{build_partition, PartitionResult};
