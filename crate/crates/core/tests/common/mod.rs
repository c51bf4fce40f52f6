#![allow(dead_code)]

use treedp::oracle::{brute_force, OracleError, Summary};
use treedp::{
    build_hypergraph, decompose, lookup, solve, Heuristic, Hypergraph, Instance, ProblemType,
    SolveError,
};

/// The five-vertex example graph: triangle a-b-c, triangle b-c-d, pendant e.
pub const EXAMPLE: &str = "\
vertex(a). vertex(b). vertex(c). vertex(d). vertex(e).
edge(a,b). edge(a,c). edge(b,c). edge(b,d). edge(c,d). edge(d,e).
";

/// Its hand-made decomposition: join {b,c,d} over two {b,c,d} exchange
/// nodes, above {a,b,c} and {d,e}, with an empty root and empty leaves.
pub const EXAMPLE_TD: &str = "\
td 8 0
node 0
node 1 b c d
node 2 b c d
node 3 b c d
node 4 a b c
node 5 d e
node 6
node 7
arc 0 1
arc 1 2
arc 1 3
arc 2 4
arc 3 5
arc 4 6
arc 5 7
";

pub fn instance(text: &str) -> Instance {
    text.parse().expect("test instance parses")
}

pub fn hypergraph(instance: &Instance, problem: &str) -> Hypergraph {
    let module = lookup(problem).unwrap();
    build_hypergraph(instance, &module.edge_predicates(), &module.vertex_predicates())
        .expect("test instance yields a hypergraph")
}

pub fn engine(
    instance: &Instance,
    problem: &str,
    problem_type: ProblemType,
    heuristic: Heuristic,
    seed: u64,
) -> Result<Summary, SolveError> {
    let module = lookup(problem).unwrap();
    let h = hypergraph(instance, problem);
    let d = decompose(&h, heuristic, seed);
    solve(instance, &h, &d, module, problem_type).map(Summary::from)
}

pub fn oracle(instance: &Instance, problem: &str, problem_type: ProblemType) -> Result<Summary, OracleError> {
    brute_force(instance, problem, problem_type).map(Summary::from)
}

pub fn count(summary: Summary) -> u64 {
    match summary {
        Summary::Count(n) => n.try_into().expect("small count"),
        other => panic!("expected a count, got {other:?}"),
    }
}

/// Asserts the engine matches the oracle on every problem type the module
/// offers, and refuses the others.
pub fn assert_matches_oracle(instance: &Instance, problem: &str, heuristic: Heuristic, seed: u64) {
    let module = lookup(problem).unwrap();
    for ty in ProblemType::ALL {
        let got = engine(instance, problem, ty, heuristic, seed);
        if module.supports(ty) {
            let want = oracle(instance, problem, ty).expect("oracle handles small instances");
            assert_eq!(got.as_ref().ok(), Some(&want), "{problem} {ty} on\n{instance}");
        } else {
            assert!(
                matches!(got, Err(SolveError::Unsupported { .. })),
                "{problem} {ty} should be refused"
            );
        }
    }
}
