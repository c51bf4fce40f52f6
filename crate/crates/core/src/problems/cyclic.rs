use std::collections::HashMap;

use crate::engine::{Extension, NodeContext, ProblemType, Row, SolveError, Table, Value};
use crate::facts::{Instance, PredicateKey};
use crate::hypergraph::Hypergraph;

use super::ProblemModule;

/// Cyclic ordering: is there a linear order of the vertices such that every
/// triple `order(a, b, c)` appears in one of the cyclic shifts
/// `a < b < c`, `b < c < a` or `c < a < b`?
///
/// A row assigns the bag vertices distinct ranks `1..=|bag|`, i.e. a local
/// linear order. It survives if every triple inside the bag is cyclically
/// ordered and some child row orders the shared vertices the same way.
/// Local orders that agree on every overlap glue into a global order, so
/// the root table is nonempty exactly when the instance is a yes-instance.
/// Many global orders share one local picture, which is why only the
/// decision problem is offered.
#[derive(Debug, Default, Clone, Copy)]
pub struct CyclicOrdering;

/// Relative order of `values`: the rank of each entry among the others.
fn relative_order(values: impl Iterator<Item = Value>) -> Vec<u16> {
    let values: Vec<Value> = values.collect();
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by_key(|&i| values[i]);
    let mut ranks = vec![0u16; values.len()];
    for (rank, i) in idx.into_iter().enumerate() {
        ranks[i] = rank as u16;
    }
    ranks
}

/// Steps `perm` to the next permutation in lexicographic order.
pub(crate) fn next_permutation(perm: &mut [u16]) -> bool {
    let Some(i) = perm.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = perm.iter().rposition(|&x| x > perm[i]).expect("pivot has a successor");
    perm.swap(i, j);
    perm[i + 1..].reverse();
    true
}

pub(crate) fn cyclically_ordered(a: u16, b: u16, c: u16) -> bool {
    (a < b && b < c) || (b < c && c < a) || (c < a && a < b)
}

impl ProblemModule for CyclicOrdering {
    fn name(&self) -> &'static str {
        "cyclic"
    }

    fn edge_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("order", 3)]
    }

    fn vertex_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("vertex", 1)]
    }

    fn domain(&self) -> &'static str {
        "local rank 1..|bag|"
    }

    fn supports(&self, problem_type: ProblemType) -> bool {
        problem_type == ProblemType::Decision
    }

    fn check_instance(&self, _instance: &Instance, h: &Hypergraph) -> Result<(), SolveError> {
        match h
            .edges()
            .iter()
            .find(|e| !e.is_isolated_wrapper() && e.members.len() != 3)
        {
            Some(e) => Err(SolveError::Instance {
                problem: self.name().to_string(),
                message: format!("edge predicate {} is not ternary", e.label),
            }),
            None => Ok(()),
        }
    }

    fn exchange(&self, ctx: &NodeContext<'_>) -> Result<Table, SolveError> {
        let child = ctx.child();
        let carried = ctx.carried_positions();
        // Bag and child bag are both sorted, so shared vertices appear in
        // the same relative sequence in either.
        let shared: Vec<(usize, usize)> = carried
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (i, c)))
            .collect();
        let triples: Vec<[usize; 3]> = ctx
            .edges_within_bag()
            .into_iter()
            .map(|e| {
                let p = |k: usize| ctx.position(e.members[k]).expect("inside bag");
                [p(0), p(1), p(2)]
            })
            .collect();

        let mut by_projection: HashMap<Vec<u16>, Vec<u32>> = HashMap::new();
        for (ci, crow) in child.rows().iter().enumerate() {
            let key = relative_order(shared.iter().map(|&(_, c)| crow.values[c]));
            by_projection.entry(key).or_default().push(ci as u32);
        }

        let mut builder = ctx.builder();
        let mut perm: Vec<u16> = (0..ctx.bag.len() as u16).collect();
        loop {
            let ok = triples
                .iter()
                .all(|&[a, b, c]| cyclically_ordered(perm[a], perm[b], perm[c]));
            if ok {
                let key = relative_order(shared.iter().map(|&(i, _)| Value(perm[i])));
                if let Some(compatible) = by_projection.get(&key) {
                    let mut row = Row::new(perm.iter().map(|&r| Value(r)).collect());
                    for &ci in compatible {
                        row = row.with_extension(Extension::Single(ci));
                    }
                    builder.merge_row(row);
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        Ok(builder.finish())
    }

    fn value_text(&self, value: Value) -> String {
        (value.0 + 1).to_string()
    }
}
