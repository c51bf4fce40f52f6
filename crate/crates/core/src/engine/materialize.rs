use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::decomp::NodeId;
use crate::problems::ProblemModule;

use super::solve::SolvedTables;
use super::table::{Extension, Value};
use super::Solution;

/// Number of distinct pointer paths below the given root rows.
///
/// Leaf rows count 1, exchange rows sum their children's counts and join
/// rows sum the products of their pairs' counts.
pub fn count_extensions(tables: &SolvedTables, root_rows: &[usize]) -> BigUint {
    let mut counts: Vec<Vec<BigUint>> = vec![Vec::new(); tables.node_count()];
    let mut order = Vec::with_capacity(tables.node_count());
    let mut stack = vec![(tables.root, false)];
    while let Some((node, expanded)) = stack.pop() {
        if expanded {
            order.push(node);
        } else {
            stack.push((node, true));
            stack.extend(tables.children[node].iter().map(|&c| (c, false)));
        }
    }

    for node in order {
        let kids = &tables.children[node];
        let node_counts: Vec<BigUint> = tables.tables[node]
            .rows()
            .iter()
            .map(|row| {
                if kids.is_empty() {
                    return BigUint::one();
                }
                let mut total = BigUint::zero();
                for ext in &row.extensions {
                    match *ext {
                        Extension::Single(i) => total += &counts[kids[0]][i as usize],
                        Extension::Pair(l, r) => {
                            total += &counts[kids[0]][l as usize] * &counts[kids[1]][r as usize]
                        }
                    }
                }
                total
            })
            .collect();
        counts[node] = node_counts;
    }
    let root = &counts[tables.root];
    root_rows.iter().map(|&i| &root[i]).sum()
}

/// Minimum cost over the root rows and the rows attaining it; `None` for
/// an empty root table.
pub fn optimum(tables: &SolvedTables) -> Option<(u64, Vec<usize>)> {
    let rows = tables.root_table().rows();
    let best = rows.iter().filter_map(|r| r.cost).min()?;
    let at = rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.cost == Some(best))
        .map(|(i, _)| i)
        .collect();
    Some((best, at))
}

#[derive(Clone, Copy, Debug)]
struct Frame {
    node: NodeId,
    row: u32,
    choice: u32,
}

/// Lazy top-down traversal of the pointer structure.
///
/// The current extension path is kept as a pre-order list of
/// `(node, row, chosen extension)` frames; advancing bumps the deepest
/// frame that has another extension and re-expands everything after it.
/// State is bounded by the number of decomposition nodes, and the work
/// between two solutions is linear in it.
pub struct Enumerator<'m> {
    tables: SolvedTables,
    module: &'m dyn ProblemModule,
    root_rows: Vec<usize>,
    next_root: usize,
    frames: Vec<Frame>,
    started: bool,
    done: bool,
    remaining: Option<usize>,
    scratch: Vec<Option<Value>>,
}

impl<'m> Enumerator<'m> {
    pub fn new(
        tables: SolvedTables,
        module: &'m dyn ProblemModule,
        root_rows: Vec<usize>,
        limit: Option<usize>,
    ) -> Self {
        let scratch = vec![None; tables.names.len()];
        Enumerator {
            tables,
            module,
            root_rows,
            next_root: 0,
            frames: Vec::new(),
            started: false,
            done: false,
            remaining: limit,
            scratch,
        }
    }

    /// Frames currently held; never exceeds the number of nodes.
    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    fn extension_count(&self, f: &Frame) -> usize {
        if self.tables.children[f.node].is_empty() {
            1
        } else {
            self.tables.tables[f.node].row(f.row as usize).extensions.len()
        }
    }

    fn push_children(&self, f: &Frame, pending: &mut Vec<(NodeId, u32)>) {
        let kids = &self.tables.children[f.node];
        if kids.is_empty() {
            return;
        }
        let ext = self.tables.tables[f.node].row(f.row as usize).extensions[f.choice as usize];
        match ext {
            Extension::Single(i) => pending.push((kids[0], i)),
            Extension::Pair(l, r) => {
                pending.push((kids[1], r));
                pending.push((kids[0], l));
            }
        }
    }

    fn descend(&mut self, mut pending: Vec<(NodeId, u32)>) {
        while let Some((node, row)) = pending.pop() {
            let frame = Frame { node, row, choice: 0 };
            self.push_children(&frame, &mut pending);
            self.frames.push(frame);
        }
    }

    /// Work left after the first `upto` frames.
    fn pending_after(&self, upto: usize) -> Vec<(NodeId, u32)> {
        let mut pending = vec![(self.tables.root, self.frames[0].row)];
        for f in &self.frames[..upto] {
            pending.pop();
            self.push_children(f, &mut pending);
        }
        pending
    }

    fn start_next_root(&mut self) -> bool {
        let Some(&row) = self.root_rows.get(self.next_root) else {
            return false;
        };
        self.next_root += 1;
        self.frames.clear();
        self.descend(vec![(self.tables.root, row as u32)]);
        true
    }

    fn advance(&mut self) -> bool {
        for k in (0..self.frames.len()).rev() {
            let f = self.frames[k];
            if (f.choice as usize) + 1 < self.extension_count(&f) {
                self.frames[k].choice += 1;
                self.frames.truncate(k + 1);
                let pending = self.pending_after(k + 1);
                self.descend(pending);
                return true;
            }
        }
        self.start_next_root()
    }

    fn current_solution(&mut self) -> Solution {
        self.scratch.iter_mut().for_each(|s| *s = None);
        for f in &self.frames {
            let table = &self.tables.tables[f.node];
            let row = table.row(f.row as usize);
            for (v, value) in table.bag().iter().zip(&row.values) {
                self.scratch[v.index()] = Some(*value);
            }
        }
        let mut entries = BTreeMap::new();
        for (i, value) in self.scratch.iter().enumerate() {
            if !self.tables.reported[i] {
                continue;
            }
            if let Some(value) = value {
                entries.insert(self.tables.names[i].clone(), self.module.value_text(*value));
            }
        }
        Solution(entries)
    }
}

impl Iterator for Enumerator<'_> {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        if self.done || self.remaining == Some(0) {
            return None;
        }
        let found = if self.started {
            self.advance()
        } else {
            self.started = true;
            self.start_next_root()
        };
        if !found {
            self.done = true;
            return None;
        }
        if let Some(r) = self.remaining.as_mut() {
            *r -= 1;
        }
        Some(self.current_solution())
    }
}
