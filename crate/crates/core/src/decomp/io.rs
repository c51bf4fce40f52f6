//! Decomposition files.
//!
//! ```text
//! td <num_nodes> <root_id>
//! node <id> [v1 v2 ...]
//! arc <parent_id> <child_id>
//! ```
//!
//! Node ids run from 0 to `num_nodes - 1`; bag vertices are instance
//! constants written in lexicographic order; arcs list children left to
//! right.

use std::fmt::Write as _;

use super::{DecompError, DecompNode, Decomposition};
use crate::hypergraph::Hypergraph;

pub fn write_decomposition(d: &Decomposition, h: &Hypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "td {} {}", d.len(), d.root()).unwrap();
    for (id, node) in d.nodes().iter().enumerate() {
        out.push_str("node ");
        out.push_str(&id.to_string());
        // VertexId order is name order
        for &v in &node.bag {
            out.push(' ');
            out.push_str(h.name(v).as_str());
        }
        out.push('\n');
    }
    for (id, node) in d.nodes().iter().enumerate() {
        for &c in &node.children {
            writeln!(out, "arc {id} {c}").unwrap();
        }
    }
    out
}

pub fn read_decomposition(text: &str, h: &Hypergraph) -> Result<Decomposition, DecompError> {
    let parse_err = |line: usize, message: String| DecompError::Parse { line, message };
    let number = |line: usize, tok: Option<&str>, what: &str| -> Result<usize, DecompError> {
        let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| parse_err(line, format!("`{tok}` is not a valid {what}")))
    };

    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (line_no, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing `td` header".into()))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("td") {
        return Err(parse_err(line_no, "expected `td <num_nodes> <root_id>`".into()));
    }
    let count = number(line_no, toks.next(), "node count")?;
    let root = number(line_no, toks.next(), "root id")?;
    if let Some(extra) = toks.next() {
        return Err(parse_err(line_no, format!("unexpected `{extra}`")));
    }

    let mut bags: Vec<Option<DecompNode>> = vec![None; count];
    let mut arcs = Vec::new();
    for (line_no, line) in lines {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("node") => {
                let id = number(line_no, toks.next(), "node id")?;
                if id >= count {
                    return Err(parse_err(line_no, format!("node id {id} out of range")));
                }
                if bags[id].is_some() {
                    return Err(parse_err(line_no, format!("node {id} declared twice")));
                }
                let mut bag = Vec::new();
                for name in toks {
                    let v = h
                        .vertex(name)
                        .ok_or_else(|| DecompError::UnknownVertex(name.to_string()))?;
                    if bag.contains(&v) {
                        return Err(parse_err(line_no, format!("vertex `{name}` repeated")));
                    }
                    bag.push(v);
                }
                bags[id] = Some(DecompNode::new(bag, Vec::new()));
            }
            Some("arc") => {
                let parent = number(line_no, toks.next(), "parent id")?;
                let child = number(line_no, toks.next(), "child id")?;
                if let Some(extra) = toks.next() {
                    return Err(parse_err(line_no, format!("unexpected `{extra}`")));
                }
                arcs.push((line_no, parent, child));
            }
            Some(other) => return Err(parse_err(line_no, format!("unknown directive `{other}`"))),
            None => unreachable!("blank lines are skipped"),
        }
    }

    let mut nodes = Vec::with_capacity(count);
    for (id, node) in bags.into_iter().enumerate() {
        nodes.push(node.ok_or_else(|| DecompError::Structure(format!("node {id} is not declared")))?);
    }
    for (line_no, parent, child) in arcs {
        if parent >= count || child >= count {
            return Err(parse_err(line_no, "arc endpoint out of range".into()));
        }
        nodes[parent].children.push(child);
    }
    Decomposition::new(nodes, root)
}
