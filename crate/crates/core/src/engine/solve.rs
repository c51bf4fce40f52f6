use std::collections::HashMap;

use crate::decomp::{validate, Decomposition, NodeId};
use crate::facts::Instance;
use crate::hypergraph::Hypergraph;
use crate::problems::ProblemModule;

use super::context::{Children, NodeContext};
use super::materialize::{count_extensions, optimum, Enumerator};
use super::table::{Extension, MergeMode, Row, Table, Value};
use super::{ProblemType, SolveError, SolveResult};

/// The tables of every node after a bottom-up run, together with what is
/// needed to turn them into solutions.
#[derive(Clone, Debug)]
pub struct SolvedTables {
    pub(crate) tables: Vec<Table>,
    pub(crate) children: Vec<Vec<NodeId>>,
    pub(crate) root: NodeId,
    pub(crate) names: Vec<String>,
    pub(crate) reported: Vec<bool>,
    pub(crate) problem_type: ProblemType,
}

impl SolvedTables {
    pub fn table(&self, node: NodeId) -> &Table {
        &self.tables[node]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn root_table(&self) -> &Table {
        &self.tables[self.root]
    }

    pub fn children(&self, node: NodeId) -> &[NodeId] {
        &self.children[node]
    }

    pub fn node_count(&self) -> usize {
        self.tables.len()
    }

    pub fn problem_type(&self) -> ProblemType {
        self.problem_type
    }

    /// Total number of rows over all nodes.
    pub fn total_rows(&self) -> usize {
        self.tables.iter().map(Table::len).sum()
    }
}

/// Computes every node's table in post-order.
///
/// Leaves receive the single empty row with cost 0; exchange and join
/// nodes are delegated to `module`. Pointers are kept unless only the
/// decision problem is asked for, and rows merge by minimum cost for the
/// optimization problem types.
pub fn compute_tables(
    instance: &Instance,
    hypergraph: &Hypergraph,
    decomposition: &Decomposition,
    module: &dyn ProblemModule,
    problem_type: ProblemType,
) -> Result<SolvedTables, SolveError> {
    if !module.supports(problem_type) {
        return Err(SolveError::Unsupported {
            problem: module.name().to_string(),
            problem_type,
        });
    }
    module.check_instance(instance, hypergraph)?;
    let report = validate(decomposition, hypergraph);
    if !report.is_valid() {
        return Err(SolveError::Decomposition(report));
    }

    let track_pointers = problem_type != ProblemType::Decision;
    let mode = if problem_type.is_optimization() {
        MergeMode::MinCost
    } else {
        MergeMode::Union
    };

    let mut tables: Vec<Option<Table>> = vec![None; decomposition.len()];
    for node in decomposition.post_order() {
        let kids = decomposition.children(node);
        let bag = decomposition.bag(node);
        let is_root = node == decomposition.root();
        let child = |i: usize| tables[kids[i]].as_ref().expect("children come first");
        let table = match kids.len() {
            0 => Table::leaf(),
            1 => {
                let ctx = NodeContext::new(
                    instance,
                    hypergraph,
                    node,
                    bag,
                    is_root,
                    Children::Exchange(child(0)),
                    mode,
                    track_pointers,
                );
                module.exchange(&ctx)?
            }
            _ => {
                let ctx = NodeContext::new(
                    instance,
                    hypergraph,
                    node,
                    bag,
                    is_root,
                    Children::Join(child(0), child(1)),
                    mode,
                    track_pointers,
                );
                module.join(&ctx)?
            }
        };
        let child_lens: Vec<usize> = kids
            .iter()
            .map(|&k| tables[k].as_ref().map_or(0, Table::len))
            .collect();
        check_table(node, bag, &table, &child_lens, problem_type, module.cost_reporting())?;
        tables[node] = Some(table);
    }

    Ok(SolvedTables {
        tables: tables.into_iter().map(|t| t.expect("all nodes visited")).collect(),
        children: decomposition.nodes().iter().map(|n| n.children.clone()).collect(),
        root: decomposition.root(),
        names: hypergraph.vertices().map(|v| hypergraph.name(v).to_string()).collect(),
        reported: module.solution_vertices(instance, hypergraph),
        problem_type,
    })
}

fn check_table(
    node: NodeId,
    bag: &[crate::hypergraph::VertexId],
    table: &Table,
    child_lens: &[usize],
    problem_type: ProblemType,
    cost_reporting: bool,
) -> Result<(), SolveError> {
    if table.bag() != bag {
        return Err(SolveError::RowShape {
            node,
            expected: bag.len(),
            found: table.bag().len(),
        });
    }
    for row in table.rows() {
        if row.values.len() != bag.len() {
            return Err(SolveError::RowShape {
                node,
                expected: bag.len(),
                found: row.values.len(),
            });
        }
        if (problem_type.is_optimization() || cost_reporting)
            && (row.cost.is_none() || row.current_cost.is_none())
        {
            return Err(SolveError::MissingCost { node });
        }
        let dangling = row.extensions.iter().any(|e| match (*e, child_lens) {
            (Extension::Single(i), [n]) => i as usize >= *n,
            (Extension::Pair(l, r), [nl, nr]) => l as usize >= *nl || r as usize >= *nr,
            _ => true,
        });
        if dangling {
            return Err(SolveError::DanglingPointer { node });
        }
    }
    Ok(())
}

/// Joins rows of the two children that carry identical assignments.
///
/// With cost reporting the joined cost is `cost(l) + cost(r) -
/// current_cost(l)`, since the shared bag's cost is contained in both
/// children.
pub fn default_join(ctx: &NodeContext<'_>, cost_reporting: bool) -> Result<Table, SolveError> {
    let (left, right) = ctx.join_children();
    if cost_reporting
        && left
            .rows()
            .iter()
            .chain(right.rows())
            .any(|r| r.current_cost.is_none() || r.cost.is_none())
    {
        return Err(SolveError::MissingCost { node: ctx.node });
    }

    let by_assignment: HashMap<&[Value], usize> = left
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.values.as_slice(), i))
        .collect();

    let mut builder = ctx.builder();
    for (ri, rrow) in right.rows().iter().enumerate() {
        let Some(&li) = by_assignment.get(rrow.values.as_slice()) else {
            continue;
        };
        let lrow = left.row(li);
        let mut row = Row::new(lrow.values.clone()).with_extension(Extension::Pair(li as u32, ri as u32));
        if cost_reporting {
            let (cl, cr) = (lrow.cost.unwrap(), rrow.cost.unwrap());
            let current = lrow.current_cost.unwrap();
            row = row.with_costs(cl + cr - current, current);
        }
        builder.merge_row(row);
    }
    Ok(builder.finish())
}

/// Builds the tables and materializes the requested result.
pub fn solve<'m>(
    instance: &Instance,
    hypergraph: &Hypergraph,
    decomposition: &Decomposition,
    module: &'m dyn ProblemModule,
    problem_type: ProblemType,
) -> Result<SolveResult<'m>, SolveError> {
    let tables = compute_tables(instance, hypergraph, decomposition, module, problem_type)?;
    Ok(materialize(tables, module))
}

/// Turns finished tables into the result their problem type asks for.
pub fn materialize(tables: SolvedTables, module: &dyn ProblemModule) -> SolveResult<'_> {
    let all_rows: Vec<usize> = (0..tables.root_table().len()).collect();
    match tables.problem_type {
        ProblemType::Decision => SolveResult::Decision(!tables.root_table().is_empty()),
        ProblemType::Counting => SolveResult::Counting(count_extensions(&tables, &all_rows)),
        ProblemType::Enumeration => {
            SolveResult::Enumeration(Box::new(Enumerator::new(tables, module, all_rows, None)))
        }
        ProblemType::OptValue => SolveResult::OptValue(optimum(&tables).map(|(c, _)| c)),
        ProblemType::OptCounting => match optimum(&tables) {
            Some((cost, rows)) => SolveResult::OptCounting {
                optimum: Some(cost),
                count: count_extensions(&tables, &rows),
            },
            None => SolveResult::OptCounting {
                optimum: None,
                count: Default::default(),
            },
        },
        ProblemType::OptEnum => match optimum(&tables) {
            Some((cost, rows)) => SolveResult::OptEnum {
                optimum: Some(cost),
                solutions: Box::new(Enumerator::new(tables, module, rows, None)),
            },
            None => SolveResult::OptEnum {
                optimum: None,
                solutions: Box::new(std::iter::empty()),
            },
        },
    }
}
