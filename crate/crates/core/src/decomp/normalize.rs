use super::{validate, Condition, DecompError, DecompNode, Decomposition, NodeId};
use crate::hypergraph::{Hypergraph, VertexId};

struct Builder<'a> {
    source: &'a Decomposition,
    nodes: Vec<DecompNode>,
}

impl Builder<'_> {
    fn push(&mut self, bag: Vec<VertexId>, children: Vec<NodeId>) -> NodeId {
        self.nodes.push(DecompNode::new(bag, children));
        self.nodes.len() - 1
    }

    fn build(&mut self, old: NodeId) -> NodeId {
        let bag = self.source.bag(old).to_vec();
        let kids: Vec<NodeId> = self
            .source
            .children(old)
            .iter()
            .map(|&c| self.build(c))
            .collect();
        match kids.len() {
            0 if bag.is_empty() => self.push(bag, vec![]),
            0 => {
                let leaf = self.push(vec![], vec![]);
                self.push(bag, vec![leaf])
            }
            1 => self.push(bag, kids),
            _ => {
                let slots: Vec<NodeId> = kids
                    .into_iter()
                    .map(|k| {
                        if self.nodes[k].bag == bag {
                            k
                        } else {
                            self.push(bag.clone(), vec![k])
                        }
                    })
                    .collect();
                self.balanced_join(&bag, &slots)
            }
        }
    }

    fn balanced_join(&mut self, bag: &[VertexId], slots: &[NodeId]) -> NodeId {
        if slots.len() == 1 {
            return slots[0];
        }
        let mid = slots.len() / 2;
        let left = self.balanced_join(bag, &slots[..mid]);
        let right = self.balanced_join(bag, &slots[mid..]);
        self.push(bag.to_vec(), vec![left, right])
    }
}

/// Rewrites a valid decomposition of `h` into semi-normal form.
///
/// Afterwards every node has at most two children, join children carry
/// the join's bag, and the root and all leaves have empty bags; the root
/// is always an exchange node. Wider fan-outs become balanced trees of
/// join copies, and mismatching join children get an exchange node with
/// the join's bag interposed. Width never grows.
pub fn semi_normalize(d: &Decomposition, h: &Hypergraph) -> Result<Decomposition, DecompError> {
    let report = validate(d, h);
    if report
        .violations
        .iter()
        .any(|v| v.condition.is_decomposition_condition())
    {
        return Err(DecompError::Invalid(report));
    }

    let mut b = Builder {
        source: d,
        nodes: Vec::with_capacity(d.len() * 2),
    };
    let mut root = b.build(d.root());
    let root_node = &b.nodes[root];
    if !root_node.bag.is_empty() || root_node.children.len() != 1 {
        root = b.push(vec![], vec![root]);
    }
    let nodes = b.nodes;
    Ok(Decomposition::new(nodes, root)
        .expect("normalization builds a tree")
        .renumbered())
}

impl Condition {
    /// The three defining conditions of a tree decomposition, as opposed to
    /// the normal-form requirements.
    pub fn is_decomposition_condition(self) -> bool {
        matches!(
            self,
            Condition::VertexCoverage | Condition::EdgeCoverage | Condition::Connectedness
        )
    }
}
