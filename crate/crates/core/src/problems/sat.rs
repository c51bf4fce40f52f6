use std::collections::HashMap;

use crate::engine::{Extension, NodeContext, Row, SolveError, Table, Value};
use crate::facts::{Fact, Instance, PredicateKey};
use crate::hypergraph::{Hypergraph, VertexId};

use super::{next_combination, ProblemModule};

const FALSE: Value = Value(0);
const TRUE: Value = Value(1);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Clause,
    Atom,
}

/// CNF satisfiability and model counting over the incidence graph.
///
/// Bags hold clauses and atoms. Atoms carry their truth value; a clause
/// carries `true` once some atom seen so far satisfies it. A child row is
/// dropped when a clause leaves the bag unsatisfied. Joins need only agree
/// on atoms, and a clause is satisfied in the join if either side
/// satisfies it.
#[derive(Debug, Default, Clone, Copy)]
pub struct Sat;

fn role_of(instance: &Instance, h: &Hypergraph, v: VertexId) -> Role {
    for &e in h.incident(v) {
        let e = h.edge(e);
        if !e.is_isolated_wrapper() {
            return if e.members[0] == v { Role::Clause } else { Role::Atom };
        }
    }
    let declared_clause = Fact::new("clause", vec![h.name(v).clone()])
        .map(|f| instance.contains(&f))
        .unwrap_or(false);
    if declared_clause {
        Role::Clause
    } else {
        Role::Atom
    }
}

fn polarity(label: &PredicateKey) -> Value {
    if label.name == "pos" {
        TRUE
    } else {
        FALSE
    }
}

impl ProblemModule for Sat {
    fn name(&self) -> &'static str {
        "sat"
    }

    fn edge_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("pos", 2), PredicateKey::new("neg", 2)]
    }

    fn vertex_predicates(&self) -> Vec<PredicateKey> {
        vec![PredicateKey::new("clause", 1), PredicateKey::new("atom", 1)]
    }

    fn domain(&self) -> &'static str {
        "true | false (atoms and clause flags)"
    }

    fn has_custom_join(&self) -> bool {
        true
    }

    fn check_instance(&self, instance: &Instance, h: &Hypergraph) -> Result<(), SolveError> {
        let fail = |message: String| SolveError::Instance {
            problem: self.name().to_string(),
            message,
        };
        let mut roles: Vec<Option<Role>> = vec![None; h.vertex_count()];
        let mut assign = |v: VertexId, r: Role| -> Result<(), SolveError> {
            match roles[v.index()] {
                Some(existing) if existing != r => Err(fail(format!(
                    "`{}` is used both as a clause and as an atom",
                    h.name(v)
                ))),
                _ => {
                    roles[v.index()] = Some(r);
                    Ok(())
                }
            }
        };
        for e in h.edges() {
            if e.is_isolated_wrapper() {
                continue;
            }
            if e.label.arity != 2 || !(e.label.name == "pos" || e.label.name == "neg") {
                return Err(fail(format!("edge predicate {} is not pos/2 or neg/2", e.label)));
            }
            assign(e.members[0], Role::Clause)?;
            assign(e.members[1], Role::Atom)?;
        }
        for (pred, role) in [("clause", Role::Clause), ("atom", Role::Atom)] {
            for fact in instance.facts_of(pred, 1) {
                if let Some(v) = h.vertex(fact.args()[0].as_str()) {
                    assign(v, role)?;
                }
            }
        }
        Ok(())
    }

    fn exchange(&self, ctx: &NodeContext<'_>) -> Result<Table, SolveError> {
        let h = ctx.hypergraph;
        let child = ctx.child();
        let roles: Vec<Role> = ctx.bag.iter().map(|&v| role_of(ctx.instance, h, v)).collect();
        let carried = ctx.carried_positions();
        let fresh_atoms: Vec<usize> = (0..ctx.bag.len())
            .filter(|&i| carried[i].is_none() && roles[i] == Role::Atom)
            .collect();
        let removed_clauses: Vec<usize> = ctx
            .removed
            .iter()
            .filter(|&&v| role_of(ctx.instance, h, v) == Role::Clause)
            .map(|&v| child.position(v).expect("removed from child bag"))
            .collect();
        // (clause position, atom position, satisfying value)
        let literals: Vec<(usize, usize, Value)> = ctx
            .edges_within_bag()
            .into_iter()
            .map(|e| {
                let c = ctx.position(e.members[0]).expect("inside bag");
                let a = ctx.position(e.members[1]).expect("inside bag");
                (c, a, polarity(&e.label))
            })
            .collect();

        let mut builder = ctx.builder();
        let mut base = vec![FALSE; ctx.bag.len()];
        for (ci, crow) in child.rows().iter().enumerate() {
            if removed_clauses.iter().any(|&p| crow.values[p] != TRUE) {
                continue;
            }
            for (i, c) in carried.iter().enumerate() {
                base[i] = match c {
                    Some(c) => crow.values[*c],
                    None => FALSE,
                };
            }
            let mut digits = vec![0u16; fresh_atoms.len()];
            loop {
                let mut values = base.clone();
                for (slot, &d) in fresh_atoms.iter().zip(&digits) {
                    values[*slot] = Value(d);
                }
                for &(c, a, sat_value) in &literals {
                    if values[a] == sat_value {
                        values[c] = TRUE;
                    }
                }
                builder.merge_row(Row::new(values).with_extension(Extension::Single(ci as u32)));
                if !next_combination(&mut digits, 2) {
                    break;
                }
            }
        }
        Ok(builder.finish())
    }

    fn join(&self, ctx: &NodeContext<'_>) -> Result<Table, SolveError> {
        let (left, right) = ctx.join_children();
        let atom_positions: Vec<usize> = ctx
            .bag
            .iter()
            .enumerate()
            .filter(|(_, &v)| role_of(ctx.instance, ctx.hypergraph, v) == Role::Atom)
            .map(|(i, _)| i)
            .collect();
        let atoms_of = |values: &[Value]| -> Vec<Value> {
            atom_positions.iter().map(|&i| values[i]).collect()
        };

        let mut by_atoms: HashMap<Vec<Value>, Vec<usize>> = HashMap::new();
        for (li, lrow) in left.rows().iter().enumerate() {
            by_atoms.entry(atoms_of(&lrow.values)).or_default().push(li);
        }

        let mut builder = ctx.builder();
        for (ri, rrow) in right.rows().iter().enumerate() {
            let Some(partners) = by_atoms.get(&atoms_of(&rrow.values)) else {
                continue;
            };
            for &li in partners {
                let lrow = left.row(li);
                // atoms agree, so OR-ing is exact for them too
                let values = lrow
                    .values
                    .iter()
                    .zip(&rrow.values)
                    .map(|(&l, &r)| if l == TRUE || r == TRUE { TRUE } else { FALSE })
                    .collect();
                builder.merge_row(
                    Row::new(values).with_extension(Extension::Pair(li as u32, ri as u32)),
                );
            }
        }
        Ok(builder.finish())
    }

    fn value_text(&self, value: Value) -> String {
        match value {
            TRUE => "true".into(),
            _ => "false".into(),
        }
    }

    fn solution_vertices(&self, instance: &Instance, h: &Hypergraph) -> Vec<bool> {
        h.vertices()
            .map(|v| role_of(instance, h, v) == Role::Atom)
            .collect()
    }
}
