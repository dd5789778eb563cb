//! Exact combinatorics of weighted complete intersections.
//!
//! A weighted complete intersection is described here only by its weights
//! `rho = (a_0, ..., a_N)` and degrees `mu = (d_1, ..., d_c)`. From these the
//! crate builds the singular-locus complex `S(rho)` and base-locus complexes
//! `B_rho(d)`, decides strict regularity, constructs order-preserving maps of
//! face posets from admissible injections, searches for and constructs
//! (strong) nef-partitions, and realizes arbitrary simplicial complexes as
//! `S(rho)`. Every fast path has a brute-force counterpart in [`oracle`].

pub mod arith;
pub mod complex;
pub mod csp;
pub mod error;
pub mod json;
pub mod maps;
pub mod nef;
pub mod oracle;
pub mod realize;
pub mod regularity;

pub use arith::{DegreeTuple, Representability, WeightTuple, DEFAULT_DP_CAP};
pub use complex::{Complex, Face, SRPresentation, WeightedComplex};
pub use error::{Error, Hypothesis, Result};
