use crate::engine::{Extension, NodeContext, Row, SolveError, Table, Value};
use crate::facts::{Instance, PredicateKey};
use crate::hypergraph::Hypergraph;

use super::{next_combination, ProblemModule};

const COLORS: [&str; 3] = ["red", "green", "blue"];

/// Graph 3-colorability.
///
/// Rows are proper colorings of the bag. An exchange row keeps its child's
/// colors, tries every color for introduced vertices and drops candidates
/// where an edge inside the bag joins two equal colors.
#[derive(Debug, Default, Clone, Copy)]
pub struct ThreeColoring;

impl ProblemModule for ThreeColoring {
    fn name(&self) -> &'static str {
        "3col"
    }

    fn edge_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("edge", 2)]
    }

    fn vertex_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("vertex", 1)]
    }

    fn domain(&self) -> &'static str {
        "red | green | blue"
    }

    fn check_instance(&self, _instance: &Instance, h: &Hypergraph) -> Result<(), SolveError> {
        binary_edges_only(self.name(), h)
    }

    fn exchange(&self, ctx: &NodeContext<'_>) -> Result<Table, SolveError> {
        let carried = ctx.carried_positions();
        let fresh: Vec<usize> = (0..carried.len()).filter(|&i| carried[i].is_none()).collect();
        let edges = edge_positions(ctx);
        let child = ctx.child();

        let mut builder = ctx.builder();
        let mut values = vec![Value(0); carried.len()];
        for (ci, crow) in child.rows().iter().enumerate() {
            for (i, c) in carried.iter().enumerate() {
                if let Some(c) = c {
                    values[i] = crow.values[*c];
                }
            }
            let mut digits = vec![0u16; fresh.len()];
            loop {
                for (slot, &d) in fresh.iter().zip(&digits) {
                    values[*slot] = Value(d);
                }
                if edges.iter().all(|&(a, b)| values[a] != values[b]) {
                    builder.merge_row(
                        Row::new(values.clone()).with_extension(Extension::Single(ci as u32)),
                    );
                }
                if !next_combination(&mut digits, COLORS.len() as u16) {
                    break;
                }
            }
        }
        Ok(builder.finish())
    }

    fn value_text(&self, value: Value) -> String {
        COLORS[value.0 as usize].to_string()
    }
}

/// Every non-wrapper hyperedge must be a binary fact.
pub(super) fn binary_edges_only(problem: &str, h: &Hypergraph) -> Result<(), SolveError> {
    match h
        .edges()
        .iter()
        .find(|e| !e.is_isolated_wrapper() && e.members.len() != 2)
    {
        Some(e) => Err(SolveError::Instance {
            problem: problem.to_string(),
            message: format!("edge predicate {} is not binary", e.label),
        }),
        None => Ok(()),
    }
}

/// Bag positions of the endpoints of every edge inside the bag. Self-loops
/// yield `(i, i)`.
pub(super) fn edge_positions(ctx: &NodeContext<'_>) -> Vec<(usize, usize)> {
    ctx.edges_within_bag()
        .into_iter()
        .map(|e| {
            let a = ctx.position(e.members[0]).expect("edge inside bag");
            let b = ctx.position(e.members[1]).expect("edge inside bag");
            (a, b)
        })
        .collect()
}
