//! Arbitrary-precision rational and cyclotomic-field arithmetic.

mod cyclotomic;
pub mod linalg;

pub use cyclotomic::{
    approximate_rational, cyclotomic_polynomial, euler_phi, Cyclotomic, Rational,
};
pub use linalg::Matrix;

use num_bigint::BigInt;

/// Shorthand for the rational p/q.
pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(d))
}

/// Shorthand for an integer as a rational.
pub fn qi(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}
