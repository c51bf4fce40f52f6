use crate::decomp::NodeId;
use crate::facts::Instance;
use crate::hypergraph::{Hyperedge, Hypergraph, VertexId};

use super::table::{MergeMode, Table, TableBuilder};

/// Child table(s) of the node being computed.
#[derive(Clone, Copy, Debug)]
pub enum Children<'a> {
    Exchange(&'a Table),
    Join(&'a Table, &'a Table),
}

/// Everything a problem module sees while computing one node's table.
#[derive(Debug)]
pub struct NodeContext<'a> {
    pub instance: &'a Instance,
    pub hypergraph: &'a Hypergraph,
    pub node: NodeId,
    /// Current bag, sorted.
    pub bag: &'a [VertexId],
    /// `bag` minus the child bag (empty at joins).
    pub introduced: Vec<VertexId>,
    /// Child bag minus `bag` (empty at joins).
    pub removed: Vec<VertexId>,
    pub is_root: bool,
    pub children: Children<'a>,
    pub(crate) mode: MergeMode,
    pub(crate) track_pointers: bool,
}

impl<'a> NodeContext<'a> {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn new(
        instance: &'a Instance,
        hypergraph: &'a Hypergraph,
        node: NodeId,
        bag: &'a [VertexId],
        is_root: bool,
        children: Children<'a>,
        mode: MergeMode,
        track_pointers: bool,
    ) -> Self {
        let (introduced, removed) = match children {
            Children::Exchange(child) => (
                bag.iter().copied().filter(|v| child.position(*v).is_none()).collect(),
                child
                    .bag()
                    .iter()
                    .copied()
                    .filter(|v| bag.binary_search(v).is_err())
                    .collect(),
            ),
            Children::Join(..) => (Vec::new(), Vec::new()),
        };
        NodeContext {
            instance,
            hypergraph,
            node,
            bag,
            introduced,
            removed,
            is_root,
            children,
            mode,
            track_pointers,
        }
    }

    /// An empty table builder for this node's bag, set up with the merge
    /// mode and pointer tracking of the current run.
    pub fn builder(&self) -> TableBuilder {
        TableBuilder::new(self.bag.to_vec(), self.mode, self.track_pointers)
    }

    pub fn merge_mode(&self) -> MergeMode {
        self.mode
    }

    /// The child table of an exchange node.
    pub fn child(&self) -> &'a Table {
        match self.children {
            Children::Exchange(t) => t,
            Children::Join(..) => panic!("join node has two children"),
        }
    }

    /// Left and right child tables of a join node.
    pub fn join_children(&self) -> (&'a Table, &'a Table) {
        match self.children {
            Children::Join(l, r) => (l, r),
            Children::Exchange(_) => panic!("exchange node has one child"),
        }
    }

    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.bag.binary_search(&v).ok()
    }

    pub fn is_introduced(&self, v: VertexId) -> bool {
        self.introduced.binary_search(&v).is_ok()
    }

    /// For every bag position, the position of the same vertex in the
    /// child bag (`None` for introduced vertices).
    pub fn carried_positions(&self) -> Vec<Option<usize>> {
        let child = self.child();
        self.bag.iter().map(|&v| child.position(v)).collect()
    }

    /// Hyperedges whose members all lie in the current bag, skipping the
    /// wrappers of isolated vertices. Each edge appears once, by id.
    pub fn edges_within_bag(&self) -> Vec<&'a Hyperedge> {
        let h = self.hypergraph;
        let mut ids: Vec<usize> = self
            .bag
            .iter()
            .flat_map(|&v| h.incident(v).iter().copied())
            .collect();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter()
            .map(|id| h.edge(id))
            .filter(|e| !e.is_isolated_wrapper())
            .filter(|e| e.member_set.iter().all(|v| self.bag.binary_search(v).is_ok()))
            .collect()
    }
}
