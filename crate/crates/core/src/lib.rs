//! Structural perturbation of weighted graph Laplacians.
//!
//! Given a weighted graph, this crate perturbs only the weights of edges that
//! already exist so that the resulting Laplacian has a simple spectrum and a
//! Fiedler vector without zero entries. Numerical verdicts come from dense
//! eigensolvers; exact verdicts come from rational characteristic polynomials,
//! discriminants and resultants.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command line
//! and parallel campaign drivers live in the `lapgen` crate.
//!
//! Node indices are 0-based throughout the library. Eigen-indices are 0-based
//! and ascending, so index 0 is the zero eigenvalue and index 1 the algebraic
//! connectivity.

#![no_std]

extern crate alloc;

pub mod eigen;
pub mod error;
pub mod exact;
pub mod generate;
pub mod graph;
pub mod lab;
pub mod laplacian;
pub mod perturb;
pub mod scalar;

pub use error::Error;
pub use graph::{BranchSchedule, Digraph, TreePath, WeightedGraph};
pub use laplacian::{LaplacianMatrix, PerturbationTuple};
pub use scalar::{Rational, Scalar};

pub type Result<T, E = Error> = core::result::Result<T, E>;
