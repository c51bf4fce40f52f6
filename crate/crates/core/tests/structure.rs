//! Structural invariants of decompositions and of the tables built over
//! them.

mod common;

use common::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treedp::decomp::NodeKind;
use treedp::engine::{compute_tables, Extension, SolvedTables};
use treedp::oracle::{exact_treewidth, generate, GenParams, Summary};
use treedp::{
    build_hypergraph, decompose, lookup, read_decomposition, semi_normalize, solve, validate,
    write_decomposition, Decomposition, Heuristic, Hypergraph, Instance, PredicateKey, ProblemType,
};

/// Random hypergraph instance: up to `max_n` vertices and edges of arity
/// 1 to 4, one predicate name per arity.
fn random_hypergraph(seed: u64, max_n: usize) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(0..=2 * n);
    let mut text = String::new();
    for v in 0..n {
        if rng.random_bool(0.3) {
            text.push_str(&format!("vertex(v{v}). "));
        }
    }
    for _ in 0..m {
        let arity = rng.random_range(1..=4usize);
        let args: Vec<String> = (0..arity).map(|_| format!("v{}", rng.random_range(0..n))).collect();
        text.push_str(&format!("h{arity}({}). ", args.join(",")));
    }
    if text.is_empty() {
        text.push_str("vertex(v0).");
    }
    let inst = instance(&text);
    let edges: Vec<PredicateKey> = (1..=4).map(|a| PredicateKey::new(format!("h{a}"), a)).collect();
    build_hypergraph(&inst, &edges, &[PredicateKey::new("vertex", 1)]).unwrap()
}

fn heuristic() -> impl Strategy<Value = Heuristic> {
    prop_oneof![Just(Heuristic::MinFill), Just(Heuristic::MinDegree)]
}

/// Nested-bag rendering of the subtree under `node`.
fn shape(d: &Decomposition, node: usize) -> String {
    let kids: Vec<String> = d.children(node).iter().map(|&c| shape(d, c)).collect();
    format!("{:?}[{}]", d.bag(node), kids.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decompositions_validate(seed in any::<u64>(), h in heuristic(), dseed in any::<u64>()) {
        let g = random_hypergraph(seed, 30);
        let d = decompose(&g, h, dseed);
        let report = validate(&d, &g);
        prop_assert!(report.is_valid(), "{report}");
        prop_assert_eq!(shape(&d, d.root()), shape(&decompose(&g, h, dseed), d.root()));
    }

    #[test]
    fn width_is_at_least_treewidth(seed in any::<u64>(), h in heuristic()) {
        let g = random_hypergraph(seed, 10);
        let d = decompose(&g, h, seed);
        let tw = exact_treewidth(&g.primal_adjacency()).unwrap() as i64;
        prop_assert!(d.width() >= tw);
    }

    #[test]
    fn normalizing_again_changes_nothing(seed in any::<u64>(), h in heuristic()) {
        let g = random_hypergraph(seed, 20);
        let d = decompose(&g, h, seed);
        let again = semi_normalize(&d, &g).unwrap();
        prop_assert!(validate(&again, &g).is_valid());
        prop_assert_eq!(again.width(), d.width());
        prop_assert_eq!(shape(&again, again.root()), shape(&d, d.root()));
    }

    #[test]
    fn files_round_trip(seed in any::<u64>()) {
        let g = random_hypergraph(seed, 20);
        let d = decompose(&g, Heuristic::MinFill, seed);
        let text = write_decomposition(&d, &g);
        let back = read_decomposition(&text, &g).unwrap();
        prop_assert_eq!(write_decomposition(&back, &g), text);
    }

    #[test]
    fn lambda_covers_every_bag(seed in any::<u64>()) {
        let g = random_hypergraph(seed, 20);
        let mut d = decompose(&g, Heuristic::MinFill, 0);
        let w = d.greedy_lambda_width(&g).unwrap();
        let mut widest = 0;
        for node in d.nodes() {
            let lambda = node.lambda.as_ref().unwrap();
            widest = widest.max(lambda.len());
            for v in &node.bag {
                prop_assert!(lambda.iter().any(|&e| g.edge(e).member_set.contains(v)));
            }
        }
        prop_assert_eq!(w, widest);
    }

    #[test]
    fn tables_are_sound(problem in prop_oneof![Just("3col"), Just("minvc"), Just("sat")], seed in 0u64..500) {
        let inst = generate(&GenParams::new(problem, 2, 14, seed).with_extra_rate(0.3)).unwrap();
        let module = lookup(problem).unwrap();
        let g = hypergraph(&inst, problem);
        let d = decompose(&g, Heuristic::MinFill, seed);
        let ty = if module.cost_reporting() { ProblemType::OptCounting } else { ProblemType::Counting };
        let tables = compute_tables(&inst, &g, &d, module, ty).unwrap();
        check_tables(&d, &tables, 2 + u32::from(problem == "3col"));
        if module.cost_reporting() {
            check_costs(&d, &tables);
        }
    }

    #[test]
    fn decision_mode_agrees(problem in prop_oneof![Just("3col"), Just("minvc"), Just("sat")], seed in 0u64..500) {
        let inst = generate(&GenParams::new(problem, 2, 12, seed).with_extra_rate(1.0)).unwrap();
        let n = count(engine(&inst, problem, ProblemType::Counting, Heuristic::MinFill, 0).unwrap());
        prop_assert_eq!(
            engine(&inst, problem, ProblemType::Decision, Heuristic::MinFill, 0).unwrap(),
            Summary::Decision(n > 0)
        );
    }
}

/// Every row matches its bag, stays under the domain bound, and every
/// pointer leads to a child row that agrees on the shared vertices.
fn check_tables(d: &Decomposition, tables: &SolvedTables, domain: u32) {
    for node in 0..d.len() {
        let table = tables.table(node);
        assert_eq!(table.bag(), d.bag(node));
        assert!(table.len() as u64 <= u64::from(domain).pow(d.bag(node).len() as u32));
        for row in table.rows() {
            assert_eq!(row.values.len(), d.bag(node).len());
            if d.node(node).kind() != NodeKind::Leaf {
                assert!(!row.extensions.is_empty(), "node {node}");
            }
            for ext in &row.extensions {
                let targets: Vec<(usize, usize)> = match *ext {
                    Extension::Single(i) => vec![(d.children(node)[0], i as usize)],
                    Extension::Pair(l, r) => vec![(d.children(node)[0], l as usize), (d.children(node)[1], r as usize)],
                };
                for (child, i) in targets {
                    let ct = tables.table(child);
                    assert!(i < ct.len());
                    for (k, v) in table.bag().iter().enumerate() {
                        if let Some(cv) = ct.value(i, *v) {
                            // clause flags may rise from child to parent
                            if d.node(node).kind() == NodeKind::Join || cv == row.values[k] {
                                continue;
                            }
                            assert!(
                                cv.0 == 0 && row.values[k].0 == 1,
                                "node {node} disagrees with child {child} on {v:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}

fn check_costs(d: &Decomposition, tables: &SolvedTables) {
    for node in 0..d.len() {
        let table = tables.table(node);
        for row in table.rows() {
            let cost = row.cost.unwrap();
            let current = row.current_cost.unwrap();
            assert!(current <= cost);
            assert_eq!(current, row.values.iter().filter(|v| v.0 == 0).count() as u64);
            for ext in &row.extensions {
                match *ext {
                    Extension::Single(i) => {
                        let child = tables.table(d.children(node)[0]);
                        let crow = child.row(i as usize);
                        let added = table
                            .bag()
                            .iter()
                            .zip(&row.values)
                            .filter(|(v, x)| x.0 == 0 && child.position(**v).is_none())
                            .count() as u64;
                        assert_eq!(cost, crow.cost.unwrap() + added, "node {node}");
                    }
                    Extension::Pair(l, r) => {
                        let kids = d.children(node);
                        let lrow = tables.table(kids[0]).row(l as usize);
                        let rrow = tables.table(kids[1]).row(r as usize);
                        assert_eq!(cost, lrow.cost.unwrap() + rrow.cost.unwrap() - lrow.current_cost.unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn solve_rejects_an_invalid_decomposition() {
    let inst = instance(EXAMPLE);
    let g = hypergraph(&inst, "3col");
    let broken = EXAMPLE_TD.replace("node 5 d e", "node 5 d");
    let d = read_decomposition(&broken, &g).unwrap();
    assert!(solve(&inst, &g, &d, lookup("3col").unwrap(), ProblemType::Counting).is_err());
}

#[test]
fn thousand_hypergraphs_validate() {
    for seed in 0..1000 {
        let g = random_hypergraph(seed, 30);
        let d = decompose(&g, Heuristic::MinFill, seed);
        assert!(validate(&d, &g).is_valid(), "seed {seed}");
    }
}

#[test]
fn generated_instance_parses_back() {
    let inst = generate(&GenParams::new("sat", 4, 60, 3)).unwrap();
    let text = inst.to_string();
    assert_eq!(text.parse::<Instance>().unwrap(), inst);
}
