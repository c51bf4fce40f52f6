//! Browser bindings for the solver: decompose an instance, inspect the
//! dynamic-programming tables of each node, and solve.
//!
//! Each exported function takes the instance as fact text and returns
//! either JSON or plain text; errors surface as JavaScript exceptions
//! carrying the message. The plain-Rust versions are public too so they
//! can be tested natively.

use serde::Serialize;
use treedp::decomp::NodeKind;
use treedp::engine::{compute_tables, Extension};
use treedp::{
    build_hypergraph, decompose, lookup, solve, Decomposition, Heuristic, Hypergraph, Instance,
    ProblemModule, ProblemType, SolveResult,
};
use wasm_bindgen::prelude::*;

/// Most solutions an enumeration returns to the page.
pub const MAX_SOLUTIONS: usize = 500;

#[derive(Serialize)]
struct TreeView {
    width: i64,
    root: usize,
    vertices: usize,
    edges: usize,
    nodes: Vec<NodeView>,
}

#[derive(Serialize)]
struct NodeView {
    id: usize,
    kind: &'static str,
    bag: Vec<String>,
    children: Vec<usize>,
    rows: Option<Vec<RowView>>,
}

#[derive(Serialize)]
struct RowView {
    values: Vec<String>,
    extensions: Vec<Vec<u32>>,
    cost: Option<u64>,
}

struct Prepared {
    instance: Instance,
    module: &'static dyn ProblemModule,
    hypergraph: Hypergraph,
    decomposition: Decomposition,
}

fn prepare(text: &str, problem: &str, heuristic: &str, seed: u64) -> Result<Prepared, String> {
    let module = lookup(problem).map_err(|e| e.to_string())?;
    let heuristic: Heuristic = heuristic.parse()?;
    let instance: Instance = text.parse().map_err(|e: treedp::ParseError| e.to_string())?;
    let hypergraph = build_hypergraph(&instance, &module.edge_predicates(), &module.vertex_predicates())
        .map_err(|e| e.to_string())?;
    let decomposition = decompose(&hypergraph, heuristic, seed);
    Ok(Prepared { instance, module, hypergraph, decomposition })
}

fn kind_name(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::Leaf => "leaf",
        NodeKind::Exchange => "exchange",
        NodeKind::Join => "join",
    }
}

fn tree_view(p: &Prepared, with_tables: bool) -> Result<TreeView, String> {
    let d = &p.decomposition;
    let tables = if with_tables {
        let ty = if p.module.supports(ProblemType::Enumeration) {
            ProblemType::Enumeration
        } else {
            ProblemType::Decision
        };
        Some(compute_tables(&p.instance, &p.hypergraph, d, p.module, ty).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let nodes = (0..d.len())
        .map(|id| NodeView {
            id,
            kind: kind_name(d.node(id).kind()),
            bag: d.bag(id).iter().map(|&v| p.hypergraph.name(v).to_string()).collect(),
            children: d.children(id).to_vec(),
            rows: tables.as_ref().map(|t| {
                t.table(id)
                    .rows()
                    .iter()
                    .map(|row| RowView {
                        values: row.values.iter().map(|&v| p.module.value_text(v)).collect(),
                        extensions: row
                            .extensions
                            .iter()
                            .map(|e| match *e {
                                Extension::Single(i) => vec![i],
                                Extension::Pair(l, r) => vec![l, r],
                            })
                            .collect(),
                        cost: row.cost,
                    })
                    .collect()
            }),
        })
        .collect();
    Ok(TreeView {
        width: d.width(),
        root: d.root(),
        vertices: p.hypergraph.vertex_count(),
        edges: p.hypergraph.edges().len(),
        nodes,
    })
}

/// The decomposition of `text`'s hypergraph as JSON: width, root and one
/// entry per node with its kind, bag and children.
pub fn decomposition_json(text: &str, problem: &str, heuristic: &str, seed: u64) -> Result<String, String> {
    let p = prepare(text, problem, heuristic, seed)?;
    serde_json::to_string(&tree_view(&p, false)?).map_err(|e| e.to_string())
}

/// Like [`decomposition_json`], with each node's table attached: rows of
/// value names, child-row pointers and, for optimization problems, costs.
pub fn tables_json(text: &str, problem: &str, heuristic: &str, seed: u64) -> Result<String, String> {
    let p = prepare(text, problem, heuristic, seed)?;
    serde_json::to_string(&tree_view(&p, true)?).map_err(|e| e.to_string())
}

/// Solves and renders the answer as text, at most [`MAX_SOLUTIONS`]
/// solutions for the enumerating problem types.
pub fn solve_text(text: &str, problem: &str, problem_type: &str, heuristic: &str, seed: u64) -> Result<String, String> {
    let p = prepare(text, problem, heuristic, seed)?;
    let ty: ProblemType = problem_type.parse()?;
    let result = solve(&p.instance, &p.hypergraph, &p.decomposition, p.module, ty).map_err(|e| e.to_string())?;
    let lines = |stream: treedp::engine::Solutions<'_>| {
        let mut out: Vec<String> = stream.take(MAX_SOLUTIONS + 1).map(|s| s.to_string()).collect();
        if out.len() > MAX_SOLUTIONS {
            out.truncate(MAX_SOLUTIONS);
            out.push(format!("… first {MAX_SOLUTIONS} shown"));
        }
        out.join("\n")
    };
    Ok(match result {
        SolveResult::Decision(yes) => if yes { "yes" } else { "no" }.to_string(),
        SolveResult::Counting(n) => n.to_string(),
        SolveResult::OptValue(Some(k)) => k.to_string(),
        SolveResult::OptCounting { optimum: Some(k), count } => format!("optimum {k}\ncount {count}"),
        SolveResult::OptEnum { optimum: Some(k), solutions } => format!("optimum {k}\n{}", lines(solutions)),
        SolveResult::OptValue(None)
        | SolveResult::OptCounting { optimum: None, .. }
        | SolveResult::OptEnum { optimum: None, .. } => "INFEASIBLE".to_string(),
        SolveResult::Enumeration(stream) => lines(stream),
    })
}

#[wasm_bindgen(js_name = decompose)]
pub fn decompose_js(text: &str, problem: &str, heuristic: &str, seed: u32) -> Result<String, JsError> {
    decomposition_json(text, problem, heuristic, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = tables)]
pub fn tables_js(text: &str, problem: &str, heuristic: &str, seed: u32) -> Result<String, JsError> {
    tables_json(text, problem, heuristic, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = solve)]
pub fn solve_js(text: &str, problem: &str, problem_type: &str, heuristic: &str, seed: u32) -> Result<String, JsError> {
    solve_text(text, problem, problem_type, heuristic, seed.into()).map_err(|e| JsError::new(&e))
}
