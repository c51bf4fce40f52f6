use std::fmt;

use super::{Decomposition, NodeId};
use crate::hypergraph::Hypergraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    VertexCoverage,
    EdgeCoverage,
    Connectedness,
    JoinBagEquality,
    Arity,
    EmptyRoot,
    EmptyLeaves,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::VertexCoverage => "vertex-coverage",
            Condition::EdgeCoverage => "edge-coverage",
            Condition::Connectedness => "connectedness",
            Condition::JoinBagEquality => "join-bag-equality",
            Condition::Arity => "arity",
            Condition::EmptyRoot => "empty-root",
            Condition::EmptyLeaves => "empty-leaves",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    pub witness: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, condition: Condition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }

    fn push(&mut self, condition: Condition, witness: String) {
        self.violations.push(Violation { condition, witness });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}: {}", v.condition, v.witness)?;
        }
        Ok(())
    }
}

/// Checks `d` against `h`: the three decomposition conditions plus the
/// semi-normal form with empty root and leaves.
pub fn validate(d: &Decomposition, h: &Hypergraph) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = h.vertex_count();

    // which nodes hold each vertex
    let mut holders: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for (id, node) in d.nodes().iter().enumerate() {
        for &v in &node.bag {
            if v.index() < n {
                holders[v.index()].push(id);
            } else {
                report.push(Condition::VertexCoverage, format!("node {id} holds unknown vertex #{}", v.0));
            }
        }
    }

    for v in h.vertices() {
        if holders[v.index()].is_empty() {
            report.push(Condition::VertexCoverage, format!("vertex {}", h.name(v)));
        }
    }

    for e in h.edges() {
        let first = &e.member_set[0];
        let covered = holders[first.index()]
            .iter()
            .any(|&id| e.member_set.iter().all(|v| d.bag(id).binary_search(v).is_ok()));
        if !covered {
            let names: Vec<&str> = e.member_set.iter().map(|&v| h.name(v).as_str()).collect();
            report.push(Condition::EdgeCoverage, format!("edge {{{}}}", names.join(",")));
        }
    }

    // a vertex's holders are connected iff exactly one of them has a parent
    // outside the holder set
    for v in h.vertices() {
        let nodes = &holders[v.index()];
        if nodes.is_empty() {
            continue;
        }
        let tops = nodes
            .iter()
            .filter(|&&id| match d.parent(id) {
                Some(p) => d.bag(p).binary_search(&v).is_err(),
                None => true,
            })
            .count();
        if tops != 1 {
            report.push(Condition::Connectedness, format!("vertex {}", h.name(v)));
        }
    }

    for (id, node) in d.nodes().iter().enumerate() {
        match node.children.len() {
            0 => {
                if !node.bag.is_empty() {
                    report.push(Condition::EmptyLeaves, format!("node {id}"));
                }
            }
            1 => {}
            2 => {
                if node.children.iter().any(|&c| d.bag(c) != node.bag.as_slice()) {
                    report.push(Condition::JoinBagEquality, format!("node {id}"));
                }
            }
            k => report.push(Condition::Arity, format!("node {id} has {k} children")),
        }
    }
    if !d.bag(d.root()).is_empty() {
        report.push(Condition::EmptyRoot, format!("node {}", d.root()));
    }
    report
}
