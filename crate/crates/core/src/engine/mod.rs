//! Bottom-up table computation over a semi-normalized decomposition and
//! materialization of the requested result from the root table.

mod context;
mod materialize;
mod solve;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use thiserror::Error;

use crate::decomp::{NodeId, ValidationReport};

pub use context::{Children, NodeContext};
pub use materialize::{count_extensions, optimum, Enumerator};
pub use solve::{compute_tables, default_join, materialize, solve, SolvedTables};
pub use table::{Extension, MergeMode, Row, Table, TableBuilder, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ProblemType {
    #[default]
    Enumeration,
    Counting,
    Decision,
    OptEnum,
    OptCounting,
    OptValue,
}

impl ProblemType {
    pub const ALL: [ProblemType; 6] = [
        ProblemType::Enumeration,
        ProblemType::Counting,
        ProblemType::Decision,
        ProblemType::OptEnum,
        ProblemType::OptCounting,
        ProblemType::OptValue,
    ];

    pub fn is_optimization(self) -> bool {
        matches!(
            self,
            ProblemType::OptEnum | ProblemType::OptCounting | ProblemType::OptValue
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemType::Enumeration => "enumeration",
            ProblemType::Counting => "counting",
            ProblemType::Decision => "decision",
            ProblemType::OptEnum => "opt-enum",
            ProblemType::OptCounting => "opt-counting",
            ProblemType::OptValue => "opt-value",
        }
    }
}

impl fmt::Display for ProblemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemType::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = ProblemType::ALL.iter().map(|t| t.as_str()).collect();
                format!("unknown problem type `{s}` (expected one of: {})", names.join(", "))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("problem `{problem}` does not support problem type `{problem_type}`")]
    Unsupported {
        problem: String,
        problem_type: ProblemType,
    },
    #[error("instance not understood by `{problem}`: {message}")]
    Instance { problem: String, message: String },
    #[error("decomposition cannot be solved over: {0}")]
    Decomposition(ValidationReport),
    #[error("node {node}: row has {found} values for a bag of {expected}")]
    RowShape {
        node: NodeId,
        expected: usize,
        found: usize,
    },
    #[error("node {node}: row lacks cost information")]
    MissingCost { node: NodeId },
    #[error("node {node}: extension pointer does not match a child row")]
    DanglingPointer { node: NodeId },
}

/// A complete solution: vertex name to value text, ordered by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Solution(pub BTreeMap<String, String>);

impl Solution {
    pub fn get(&self, vertex: &str) -> Option<&str> {
        self.0.get(vertex).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Space-separated `vertex=value` entries.
impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

pub type Solutions<'a> = Box<dyn Iterator<Item = Solution> + Send + 'a>;

pub enum SolveResult<'a> {
    Decision(bool),
    Counting(BigUint),
    Enumeration(Solutions<'a>),
    /// `None` when no solution exists.
    OptValue(Option<u64>),
    OptCounting {
        optimum: Option<u64>,
        count: BigUint,
    },
    OptEnum {
        optimum: Option<u64>,
        solutions: Solutions<'a>,
    },
}

impl fmt::Debug for SolveResult<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveResult::Decision(b) => write!(f, "Decision({b})"),
            SolveResult::Counting(n) => write!(f, "Counting({n})"),
            SolveResult::Enumeration(_) => f.write_str("Enumeration(..)"),
            SolveResult::OptValue(v) => write!(f, "OptValue({v:?})"),
            SolveResult::OptCounting { optimum, count } => {
                write!(f, "OptCounting {{ optimum: {optimum:?}, count: {count} }}")
            }
            SolveResult::OptEnum { optimum, .. } => write!(f, "OptEnum {{ optimum: {optimum:?}, .. }}"),
        }
    }
}

impl SolveResult<'_> {
    pub fn problem_type(&self) -> ProblemType {
        match self {
            SolveResult::Decision(_) => ProblemType::Decision,
            SolveResult::Counting(_) => ProblemType::Counting,
            SolveResult::Enumeration(_) => ProblemType::Enumeration,
            SolveResult::OptValue(_) => ProblemType::OptValue,
            SolveResult::OptCounting { .. } => ProblemType::OptCounting,
            SolveResult::OptEnum { .. } => ProblemType::OptEnum,
        }
    }
}
