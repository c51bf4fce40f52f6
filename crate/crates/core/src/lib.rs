//! Dynamic programming over tree decompositions of fact-based instances.
//!
//! An [`Instance`] of ground facts is read as a [`Hypergraph`] through a
//! problem's designated edge and vertex predicates, decomposed into a
//! semi-normalized tree decomposition, and solved bottom-up by a
//! [`ProblemModule`] that computes each node's table from its children's.
//! Extension pointers between rows let the root table be turned into a
//! decision, a count, an optimum or a lazily enumerated stream of
//! solutions.
//!
//! ```
//! use treedp::{build_hypergraph, decompose, lookup, solve, Heuristic, ProblemType, SolveResult};
//!
//! let instance = "edge(a,b). edge(b,c). edge(a,c). edge(c,d).".parse().unwrap();
//! let module = lookup("3col").unwrap();
//! let h = build_hypergraph(&instance, &module.edge_predicates(), &module.vertex_predicates()).unwrap();
//! let d = decompose(&h, Heuristic::MinFill, 0);
//! match solve(&instance, &h, &d, module, ProblemType::Counting).unwrap() {
//!     SolveResult::Counting(n) => assert_eq!(n.to_string(), "12"),
//!     _ => unreachable!(),
//! }
//! ```

pub mod decomp;
pub mod engine;
pub mod facts;
pub mod hypergraph;
pub mod oracle;
pub mod problems;

pub use decomp::{
    decompose, read_decomposition, semi_normalize, validate, write_decomposition, DecompError,
    Decomposition, Heuristic,
};
pub use engine::{compute_tables, solve, ProblemType, Solution, SolveError, SolveResult, SolvedTables};
pub use facts::{parse_instance, Fact, Instance, ParseError, PredicateKey};
pub use hypergraph::{build_hypergraph, Hypergraph, HypergraphError};
pub use problems::{lookup, ProblemModule, UnknownProblem, PROBLEM_NAMES};
