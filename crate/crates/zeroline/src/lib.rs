//! Exact computation in the degree-graded algebra attached to quadratic
//! forms: Witt and Grothendieck-Witt rings, Milnor K-theory and Milnor-Witt
//! K-theory over Q, R, C and odd finite fields, plus the bigraded
//! eta-inverted sphere ring over C and its comparison with the
//! four-periodic Witt-theory ring.
//!
//! Everything is integer-exact: rationals are arbitrary precision, finite
//! fields are index-encoded, and every decision procedure either answers
//! exactly, reports `Unknown` (divisible residues over R and C) or
//! `Unsupported` (outside the classification tables). No floating point
//! exists anywhere in this crate.
//!
//! All values are immutable after construction and all operations are pure,
//! so everything here can be shared freely across threads.

pub mod arith;
pub mod error;
pub mod etalocal;
pub mod field;
pub mod literal;
pub mod milnor;
pub mod milnorwitt;
pub mod powerops;
pub mod quadform;
pub mod verdict;

pub use error::{Error, Result};
