//! Exact combinatorial layer of tropical curve gluing: arbitrary-precision
//! lattice algebra, rational polyhedra with integral-affine charts, decorated
//! tropical graphs, and moduli presentations with lattice-index multiplicities.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`); there are no floats
//! anywhere in the public API.

pub mod graph;
pub mod json;
pub mod lattice;
pub mod moduli;
pub mod poly;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Shorthand used throughout the crate.
pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;
