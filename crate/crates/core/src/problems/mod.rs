//! Built-in problem modules.
//!
//! A module supplies the table computation for exchange nodes and,
//! optionally, for join nodes; everything else (traversal, pointer
//! bookkeeping, materialization) is done by the engine.

mod cyclic;
mod minvc;
mod sat;
mod threecol;

use thiserror::Error;

use crate::engine::{default_join, NodeContext, ProblemType, SolveError, Table, Value};
use crate::facts::{Instance, PredicateKey};
use crate::hypergraph::Hypergraph;

pub use cyclic::CyclicOrdering;
pub(crate) use cyclic::{cyclically_ordered, next_permutation};
pub use minvc::MinVertexCover;
pub use sat::Sat;
pub use threecol::ThreeColoring;

/// The exchange/join contract a problem plugs into the engine.
///
/// Implementations hold no mutable state; every call sees the node only
/// through its [`NodeContext`].
pub trait ProblemModule: Send + Sync {
    fn name(&self) -> &'static str;

    /// Predicates whose facts become hyperedges.
    fn edge_predicates(&self) -> Vec<PredicateKey>;

    /// Predicates whose arguments declare vertices.
    fn vertex_predicates(&self) -> Vec<PredicateKey>;

    /// Human-readable description of the values assigned to bag vertices.
    fn domain(&self) -> &'static str;

    /// Whether rows carry `cost` and `current_cost`.
    fn cost_reporting(&self) -> bool {
        false
    }

    fn supports(&self, problem_type: ProblemType) -> bool {
        !problem_type.is_optimization() || self.cost_reporting()
    }

    fn has_custom_join(&self) -> bool {
        false
    }

    /// Rejects instances the module cannot interpret.
    fn check_instance(&self, _instance: &Instance, _hypergraph: &Hypergraph) -> Result<(), SolveError> {
        Ok(())
    }

    fn exchange(&self, ctx: &NodeContext<'_>) -> Result<Table, SolveError>;

    fn join(&self, ctx: &NodeContext<'_>) -> Result<Table, SolveError> {
        default_join(ctx, self.cost_reporting())
    }

    fn value_text(&self, value: Value) -> String;

    /// Which vertices appear in solutions, indexed by vertex id.
    fn solution_vertices(&self, _instance: &Instance, hypergraph: &Hypergraph) -> Vec<bool> {
        vec![true; hypergraph.vertex_count()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown problem `{0}` (expected one of: 3col, sat, minvc, cyclic)")]
pub struct UnknownProblem(pub String);

static THREECOL: ThreeColoring = ThreeColoring;
static SAT: Sat = Sat;
static MINVC: MinVertexCover = MinVertexCover;
static CYCLIC: CyclicOrdering = CyclicOrdering;

/// Names accepted by [`lookup`].
pub const PROBLEM_NAMES: [&str; 4] = ["3col", "sat", "minvc", "cyclic"];

pub fn lookup(name: &str) -> Result<&'static dyn ProblemModule, UnknownProblem> {
    match name {
        "3col" => Ok(&THREECOL),
        "sat" => Ok(&SAT),
        "minvc" => Ok(&MINVC),
        "cyclic" => Ok(&CYCLIC),
        other => Err(UnknownProblem(other.to_string())),
    }
}

/// Odometer over `base^len` value combinations.
pub(crate) fn next_combination(digits: &mut [u16], base: u16) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}
