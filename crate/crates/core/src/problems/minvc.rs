use crate::engine::{Extension, NodeContext, Row, SolveError, Table, Value};
use crate::facts::{Instance, PredicateKey};
use crate::hypergraph::Hypergraph;

use super::threecol::{binary_edges_only, edge_positions};
use super::{next_combination, ProblemModule};

const IN: Value = Value(0);
const OUT: Value = Value(1);

/// Minimum vertex cover.
///
/// Rows map bag vertices to `in`/`out` with no edge inside the bag having
/// both endpoints out. `current_cost` is the number of bag vertices in the
/// cover; `cost` adds the vertices newly put in to the child row's cost.
/// Joins use the engine's default join, which removes the doubly counted
/// bag cost.
#[derive(Debug, Default, Clone, Copy)]
pub struct MinVertexCover;

impl ProblemModule for MinVertexCover {
    fn name(&self) -> &'static str {
        "minvc"
    }

    fn edge_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("edge", 2)]
    }

    fn vertex_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("vertex", 1)]
    }

    fn domain(&self) -> &'static str {
        "in | out"
    }

    fn cost_reporting(&self) -> bool {
        true
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
        let mut values = vec![IN; carried.len()];
        for (ci, crow) in child.rows().iter().enumerate() {
            let child_cost = crow.cost.ok_or(SolveError::MissingCost { node: ctx.node })?;
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
                if edges.iter().all(|&(a, b)| values[a] == IN || values[b] == IN) {
                    let current = values.iter().filter(|&&v| v == IN).count() as u64;
                    let added = digits.iter().filter(|&&d| Value(d) == IN).count() as u64;
                    builder.merge_row(
                        Row::new(values.clone())
                            .with_extension(Extension::Single(ci as u32))
                            .with_costs(child_cost + added, current),
                    );
                }
                if !next_combination(&mut digits, 2) {
                    break;
                }
            }
        }
        Ok(builder.finish())
    }

    fn value_text(&self, value: Value) -> String {
        match value {
            IN => "in".into(),
            OUT => "out".into(),
            other => format!("?{}", other.0),
        }
    }
}
