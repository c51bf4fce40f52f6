//! Reference solvers by exhaustive search, and a seeded generator of
//! tree-like instances with a prescribed decomposition width.

mod brute;
mod generate;
mod small;
mod summary;

use thiserror::Error;

use crate::engine::ProblemType;

pub use brute::{brute_force, SEARCH_LIMIT};
pub use generate::{generate, GenParams};
pub use small::{exact_treewidth, small_instance};
pub use summary::Summary;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("unknown problem `{0}` (expected one of: 3col, sat, minvc, cyclic)")]
    UnknownProblem(String),
    #[error("problem `{problem}` does not support problem type `{problem_type}`")]
    Unsupported {
        problem: String,
        problem_type: ProblemType,
    },
    #[error("exhaustive search would exceed {limit} candidates")]
    TooLarge { limit: u128 },
    #[error("{0}")]
    Instance(String),
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("gave up after {attempts} augmentation attempts at width {reached} (target {target})")]
    GenerationFailed {
        target: usize,
        reached: usize,
        attempts: usize,
    },
}
