use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not connected")]
    NotConnected,
    #[error("input is not a tree")]
    NotATree,
    #[error("path is not contained in the tree")]
    PathNotInTree,
    #[error("invalid permutation")]
    InvalidPermutation,
    #[error("perturbation names pair ({0}, {1}) outside the support")]
    SupportViolation(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("graph is disconnected (algebraic connectivity is zero)")]
    Disconnected,
    #[error("algebraic connectivity {lambda2} is not simple")]
    DegenerateLambda2 { lambda2: f64, vector: Vec<f64> },
    #[error("eigenvalue {index} is not simple")]
    DegenerateLambda { index: usize },
    #[error("Fiedler vector has a zero entry at node {index}")]
    DegenerateFiedler { index: usize },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("X does not divide the polynomial")]
    XNotARoot,
    #[error("attachment schedule exhausted on edge ({0}, {1}); last gap {2:e}")]
    ScheduleExhausted(usize, usize, f64),
    #[error("perturbation budget exhausted; best value reached {best:e}")]
    BudgetExhausted { best: f64 },
    #[error("no diverging rooted spanning tree")]
    NoDivergingTree,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
}
