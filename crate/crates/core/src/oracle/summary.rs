use num_bigint::BigUint;

use crate::engine::{Solution, SolveResult};

/// A fully materialized, order-independent view of a [`SolveResult`],
/// for comparing results from different solvers or decompositions.
///
/// Solution streams are collected and sorted but not deduplicated, so a
/// solver that repeats a solution compares unequal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summary {
    Decision(bool),
    Count(BigUint),
    Solutions(Vec<Solution>),
    Optimum(Option<u64>),
    OptimumCount {
        optimum: Option<u64>,
        count: BigUint,
    },
    OptimumSolutions {
        optimum: Option<u64>,
        solutions: Vec<Solution>,
    },
}

fn sorted(solutions: impl Iterator<Item = Solution>) -> Vec<Solution> {
    let mut all: Vec<Solution> = solutions.collect();
    all.sort();
    all
}

impl From<SolveResult<'_>> for Summary {
    fn from(result: SolveResult<'_>) -> Self {
        match result {
            SolveResult::Decision(b) => Summary::Decision(b),
            SolveResult::Counting(n) => Summary::Count(n),
            SolveResult::Enumeration(s) => Summary::Solutions(sorted(s)),
            SolveResult::OptValue(v) => Summary::Optimum(v),
            SolveResult::OptCounting { optimum, count } => Summary::OptimumCount { optimum, count },
            SolveResult::OptEnum { optimum, solutions } => Summary::OptimumSolutions {
                optimum,
                solutions: sorted(solutions),
            },
        }
    }
}
