//! Exact computations with perfect complexes of free modules over local rings
//! and principal ideal domains.
//!
//! The crate builds chain complexes over a small family of computable rings
//! ([`ring::Ring`]), minimizes them over local rings, decomposes them over
//! PIDs into summands of length at most one, and certifies indecomposability
//! of the Koszul-type families with a leading-form injectivity test.

pub mod complex;
pub mod decompose;
pub mod demo;
pub mod error;
pub mod generators;
pub mod irreducible;
pub mod json;
pub mod matrix;
pub mod minimize;
pub mod ring;

pub use complex::{ChainComplex, ChainMap, CohomologyReport};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use ring::{Field, Ring, RingElement, Valuation};
