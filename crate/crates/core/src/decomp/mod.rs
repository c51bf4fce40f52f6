//! Tree decompositions: construction, semi-normalization, validation and
//! a line-oriented file format.

mod build;
mod io;
mod normalize;
mod validate;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::hypergraph::{Hypergraph, VertexId};

pub use build::{decompose, elimination_order};
pub use io::{read_decomposition, write_decomposition};
pub use normalize::semi_normalize;
pub use validate::{validate, Condition, ValidationReport, Violation};

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompNode {
    /// Sorted, duplicate-free.
    pub bag: Vec<VertexId>,
    pub children: Vec<NodeId>,
    /// Hyperedge ids covering the bag, once assigned.
    pub lambda: Option<Vec<usize>>,
}

impl DecompNode {
    pub fn new(mut bag: Vec<VertexId>, children: Vec<NodeId>) -> Self {
        bag.sort_unstable();
        bag.dedup();
        DecompNode {
            bag,
            children,
            lambda: None,
        }
    }

    pub fn kind(&self) -> NodeKind {
        match self.children.len() {
            0 => NodeKind::Leaf,
            1 => NodeKind::Exchange,
            _ => NodeKind::Join,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Exchange,
    Join,
}

/// A rooted tree of bags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    nodes: Vec<DecompNode>,
    parent: Vec<Option<NodeId>>,
    root: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("not a tree: {0}")]
    Structure(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("decomposition is invalid: {0}")]
    Invalid(ValidationReport),
    #[error("vertex `{0}` is covered by no hyperedge")]
    Uncoverable(String),
}

impl Decomposition {
    /// Checks that `nodes` form a single tree rooted at `root`.
    pub fn new(nodes: Vec<DecompNode>, root: NodeId) -> Result<Self, DecompError> {
        let n = nodes.len();
        if root >= n {
            return Err(DecompError::Structure(format!("root {root} does not exist")));
        }
        let mut parent = vec![None; n];
        for (id, node) in nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= n {
                    return Err(DecompError::Structure(format!("node {id} has unknown child {c}")));
                }
                if c == root {
                    return Err(DecompError::Structure(format!("root {root} has a parent")));
                }
                if let Some(p) = parent[c] {
                    return Err(DecompError::Structure(format!(
                        "node {c} is a child of both {p} and {id}"
                    )));
                }
                parent[c] = Some(id);
            }
        }
        let d = Decomposition { nodes, parent, root };
        let reached = d.pre_order().len();
        if reached != n {
            return Err(DecompError::Structure(format!(
                "{} node(s) are not reachable from the root",
                n - reached
            )));
        }
        Ok(d)
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> &DecompNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[DecompNode] {
        &self.nodes
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id]
    }

    pub fn bag(&self, id: NodeId) -> &[VertexId] {
        &self.nodes[id].bag
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id].children
    }

    pub fn pre_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        let mut seen = HashSet::new();
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            order.push(id);
            stack.extend(self.nodes[id].children.iter().rev());
        }
        order
    }

    /// Children before parents; siblings left to right.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                order.push(id);
            } else {
                stack.push((id, true));
                for &c in self.nodes[id].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// Largest bag size minus one; `-1` when every bag is empty.
    pub fn width(&self) -> i64 {
        self.nodes.iter().map(|n| n.bag.len() as i64).max().unwrap_or(0) - 1
    }

    /// Renumbers nodes in pre-order so the root gets id 0.
    pub(crate) fn renumbered(self) -> Decomposition {
        let order = self.pre_order();
        let mut new_id = vec![0; self.nodes.len()];
        for (i, &old) in order.iter().enumerate() {
            new_id[old] = i;
        }
        let mut nodes: Vec<Option<DecompNode>> = self.nodes.into_iter().map(Some).collect();
        let renumbered = order
            .iter()
            .map(|&old| {
                let mut node = nodes[old].take().expect("each node visited once");
                for c in &mut node.children {
                    *c = new_id[*c];
                }
                node
            })
            .collect();
        Decomposition::new(renumbered, 0).expect("renumbering preserves the tree")
    }

    /// Assigns a greedy edge cover to every bag and returns the largest
    /// cover size.
    ///
    /// Hyperedges with equal member sets count once (the lowest id stands
    /// for all of them). The result bounds the generalized hypertree width
    /// from above and is meant for reporting only.
    pub fn greedy_lambda_width(&mut self, h: &Hypergraph) -> Result<usize, DecompError> {
        let mut representative = vec![true; h.edges().len()];
        let mut seen_sets = HashSet::new();
        for e in h.edges() {
            if !seen_sets.insert(&e.member_set) {
                representative[e.id] = false;
            }
        }

        let mut widest = 0;
        for node in &mut self.nodes {
            let mut uncovered: HashSet<VertexId> = node.bag.iter().copied().collect();
            let mut candidates: Vec<usize> = node
                .bag
                .iter()
                .flat_map(|&v| h.incident(v).iter().copied())
                .filter(|&e| representative[e])
                .collect();
            candidates.sort_unstable();
            candidates.dedup();

            let mut lambda = Vec::new();
            while !uncovered.is_empty() {
                let mut best: Option<(usize, usize)> = None;
                for &e in &candidates {
                    let gain = h
                        .edge(e)
                        .member_set
                        .iter()
                        .filter(|v| uncovered.contains(v))
                        .count();
                    if gain > 0 && best.is_none_or(|(g, _)| gain > g) {
                        best = Some((gain, e));
                    }
                }
                let Some((_, e)) = best else {
                    let v = uncovered.iter().min().expect("nonempty");
                    return Err(DecompError::Uncoverable(h.name(*v).to_string()));
                };
                for v in &h.edge(e).member_set {
                    uncovered.remove(v);
                }
                lambda.push(e);
            }
            lambda.sort_unstable();
            widest = widest.max(lambda.len());
            node.lambda = Some(lambda);
        }
        Ok(widest)
    }
}

/// Elimination-ordering heuristic used by [`decompose`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Heuristic {
    MinDegree,
    #[default]
    MinFill,
}

impl FromStr for Heuristic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-degree" => Ok(Heuristic::MinDegree),
            "min-fill" => Ok(Heuristic::MinFill),
            other => Err(format!(
                "unknown heuristic `{other}` (expected `min-fill` or `min-degree`)"
            )),
        }
    }
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::MinDegree => "min-degree",
            Heuristic::MinFill => "min-fill",
        })
    }
}
