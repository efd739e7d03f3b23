//! Equisingularity type of the general polar curve of a general irreducible
//! plane curve germ, computed from the discrete invariants `(n; m1, ..., mr)`.
//!
//! The crate builds the singularity cluster of the branch and the cluster of
//! its general polar, factors the polar into Merle packages and branches,
//! computes every pairwise intersection multiplicity in closed form, and
//! cross-checks the closed forms against Noether's formula on branch traces
//! and against an explicit symbolic computation on sampled members.

pub mod arith;
pub mod audit;
pub mod classify;
pub mod cluster;
pub mod decompose;
pub mod eqclass;
pub mod error;
pub mod intersect;
pub mod series;

pub use error::{ClassViolation, Error, Result};

/// Integers are arbitrary precision throughout.
pub type Int = num_bigint::BigInt;
/// Exact rationals.
pub type Rational = num_rational::BigRational;
