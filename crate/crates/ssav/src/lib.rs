//! Supersingular isogeny classes over finite fields and the counts of
//! superspecial abelian surfaces and supersingular elliptic curves they carry.
//!
//! Every closed-form count is assembled from exact class numbers and checked
//! against an independent path: lattices of orders for surfaces, brute-force
//! curve enumeration for elliptic curves, and cyclotomic Galois orbits for the
//! conjugacy rules.

pub mod arith;
pub mod census;
pub mod cm_quartic;
pub mod dimension;
pub mod error;
pub mod oracle;
pub mod orders;
pub mod quadratics;
pub mod types_even;
pub mod weil;

pub use error::{Error, Result};
pub use num_rational::BigRational as Rational;
