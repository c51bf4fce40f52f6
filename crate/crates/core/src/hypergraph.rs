//! Hypergraph view of an instance, built from designated edge and vertex
//! predicates.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::facts::{Constant, Instance, PredicateKey};

/// Label given to the singleton hyperedges that wrap isolated vertices.
pub const ISOLATED_LABEL: &str = "__isolated";

/// Index of a vertex within its hypergraph.
///
/// Vertex ids follow the lexicographic order of vertex names, so sorting
/// by id is sorting by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub id: usize,
    /// Predicate of the fact this edge came from.
    pub label: PredicateKey,
    /// Members as written in the fact, repetitions included.
    pub members: Vec<VertexId>,
    /// Distinct members, sorted.
    pub member_set: Vec<VertexId>,
}

impl Hyperedge {
    pub fn is_isolated_wrapper(&self) -> bool {
        self.label.name == ISOLATED_LABEL
    }
}

#[derive(Clone, Debug)]
pub struct Hypergraph {
    names: Vec<Constant>,
    lookup: HashMap<Constant, VertexId>,
    edges: Vec<Hyperedge>,
    incident: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypergraphError {
    #[error("at least one edge predicate must be designated")]
    NoEdgePredicates,
    #[error("the instance yields an empty vertex set")]
    EmptyVertexSet,
    #[error("predicate `{name}` is designated with arity {expected} but occurs with arity {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },
}

impl Hypergraph {
    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.names.len() as u32).map(VertexId)
    }

    pub fn name(&self, v: VertexId) -> &Constant {
        &self.names[v.index()]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        // Constants are validated on construction; an invalid name is simply absent.
        let key = Constant::new(name).ok()?;
        self.lookup.get(&key).copied()
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Hyperedge {
        &self.edges[id]
    }

    /// Ids of the hyperedges containing `v`, ascending.
    pub fn incident(&self, v: VertexId) -> &[usize] {
        &self.incident[v.index()]
    }

    /// Adjacency of the primal graph: one clique per hyperedge member set.
    pub fn primal_adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.vertex_count()];
        for e in &self.edges {
            for (i, &u) in e.member_set.iter().enumerate() {
                for &w in &e.member_set[i + 1..] {
                    adj[u.index()].insert(w.index());
                    adj[w.index()].insert(u.index());
                }
            }
        }
        adj
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} vertices, {} hyperedges", self.vertex_count(), self.edges.len())?;
        for e in &self.edges {
            let members: Vec<&str> = e.members.iter().map(|&v| self.name(v).as_str()).collect();
            writeln!(f, "  {}: {} {{{}}}", e.id, e.label, members.join(","))?;
        }
        Ok(())
    }
}

/// Builds the hypergraph of `instance`.
///
/// Every fact of an edge predicate becomes one hyperedge. Vertices are the
/// arguments of edge facts plus the arguments of vertex-predicate facts;
/// a declared vertex that occurs in no edge is wrapped in a singleton
/// hyperedge labelled [`ISOLATED_LABEL`].
pub fn build_hypergraph(
    instance: &Instance,
    edge_predicates: &[PredicateKey],
    vertex_predicates: &[PredicateKey],
) -> Result<Hypergraph, HypergraphError> {
    if edge_predicates.is_empty() {
        return Err(HypergraphError::NoEdgePredicates);
    }
    for designated in edge_predicates.iter().chain(vertex_predicates) {
        if let Some(found) = instance
            .predicates()
            .find(|k| k.name == designated.name && k.arity != designated.arity)
        {
            // Another arity is fine as long as the designated one is also present.
            if instance.facts_of(&designated.name, designated.arity).is_empty() {
                return Err(HypergraphError::ArityMismatch {
                    name: designated.name.clone(),
                    expected: designated.arity,
                    found: found.arity,
                });
            }
        }
    }

    let mut names: BTreeSet<&Constant> = BTreeSet::new();
    let mut in_edge: BTreeSet<&Constant> = BTreeSet::new();
    for key in edge_predicates {
        for fact in instance.facts_of(&key.name, key.arity) {
            names.extend(fact.args());
            in_edge.extend(fact.args());
        }
    }
    for key in vertex_predicates {
        for fact in instance.facts_of(&key.name, key.arity) {
            names.extend(fact.args());
        }
    }
    if names.is_empty() {
        return Err(HypergraphError::EmptyVertexSet);
    }

    let names: Vec<Constant> = names.into_iter().cloned().collect();
    let lookup: HashMap<Constant, VertexId> = names
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), VertexId(i as u32)))
        .collect();

    let mut edges = Vec::new();
    for key in edge_predicates {
        for fact in instance.facts_of(&key.name, key.arity) {
            let members: Vec<VertexId> = fact.args().iter().map(|a| lookup[a]).collect();
            if members.is_empty() {
                // A nullary edge predicate contributes no vertices.
                continue;
            }
            let mut member_set = members.clone();
            member_set.sort_unstable();
            member_set.dedup();
            edges.push(Hyperedge {
                id: edges.len(),
                label: key.clone(),
                members,
                member_set,
            });
        }
    }
    for (i, name) in names.iter().enumerate() {
        if !in_edge.contains(name) {
            let v = VertexId(i as u32);
            edges.push(Hyperedge {
                id: edges.len(),
                label: PredicateKey::new(ISOLATED_LABEL, 1),
                members: vec![v],
                member_set: vec![v],
            });
        }
    }

    let mut incident = vec![Vec::new(); names.len()];
    for e in &edges {
        for &v in &e.member_set {
            incident[v.index()].push(e.id);
        }
    }

    Ok(Hypergraph {
        names,
        lookup,
        edges,
        incident,
    })
}

/// Edge designations for the incidence graph of a CNF formula: both literal
/// predicates connect a clause to an atom.
pub fn incidence_edges(positive: PredicateKey, negative: PredicateKey) -> Vec<PredicateKey> {
    vec![positive, negative]
}
