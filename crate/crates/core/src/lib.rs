//! Exact invariant theory for binary polyhedral groups and the Automorphic
//! Lie Algebras built on top of it.
//!
//! Everything here runs over cyclotomic fields with big-rational
//! coefficients; there are no floating point comparisons anywhere except in
//! [`exactnum::Cyclotomic::to_complex`], which is only used for display and
//! for guessing candidates that are then verified exactly.

pub mod alia;
pub mod exactnum;
pub mod forms;
pub mod grouprep;
pub mod invvec;
pub mod liebase;
pub mod rootcoh;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {from} does not divide {to}")]
    ConductorMismatch { from: u32, to: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    /// A computed quantity failed a consistency check it should satisfy.
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
