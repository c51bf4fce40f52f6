use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{semi_normalize, DecompNode, Decomposition, Heuristic, NodeId};
use crate::hypergraph::{Hypergraph, VertexId};

/// Number of missing edges among the neighbours of `v`.
fn fill_in(adj: &[BTreeSet<usize>], v: usize) -> usize {
    let nbrs = &adj[v];
    let d = nbrs.len();
    let mut present = 0;
    for &u in nbrs {
        present += adj[u].intersection(nbrs).count();
    }
    // each present edge was counted from both ends
    d * d.saturating_sub(1) / 2 - present / 2
}

/// Greedy elimination ordering over a primal graph.
///
/// Ties on the heuristic score are broken by a seed-determined random
/// priority, so different seeds explore different orderings.
pub fn elimination_order(adj: &[BTreeSet<usize>], heuristic: Heuristic, seed: u64) -> Vec<usize> {
    let n = adj.len();
    let mut priority: Vec<usize> = (0..n).collect();
    priority.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));

    let mut graph = adj.to_vec();
    let score = |g: &[BTreeSet<usize>], v: usize| match heuristic {
        Heuristic::MinDegree => g[v].len(),
        Heuristic::MinFill => fill_in(g, v),
    };
    let mut scores: Vec<usize> = (0..n).map(|v| score(&graph, v)).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);

    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .min_by_key(|&v| (scores[v], priority[v]))
            .expect("a live vertex remains");
        alive[v] = false;
        order.push(v);

        let nbrs: Vec<usize> = graph[v].iter().copied().collect();
        for &u in &nbrs {
            graph[u].remove(&v);
        }
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                graph[a].insert(b);
                graph[b].insert(a);
            }
        }
        graph[v].clear();

        let mut touched: BTreeSet<usize> = nbrs.iter().copied().collect();
        if heuristic == Heuristic::MinFill {
            for &u in &nbrs {
                touched.extend(graph[u].iter().copied());
            }
        }
        for u in touched {
            if alive[u] {
                scores[u] = score(&graph, u);
            }
        }
    }
    order
}

/// Bags and parent links from bucket elimination along `order`.
///
/// Node `i` belongs to the `i`-th eliminated vertex. Returns the bags and
/// the parent of every node; the last node is the root and the roots of
/// other components hang below it.
fn bucket_tree(adj: &[BTreeSet<usize>], order: &[usize]) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
    let n = order.len();
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut graph = adj.to_vec();
    let mut bags = Vec::with_capacity(n);
    let mut parent = vec![None; n];

    for (i, &v) in order.iter().enumerate() {
        let nbrs: Vec<usize> = graph[v].iter().copied().collect();
        for &u in &nbrs {
            graph[u].remove(&v);
        }
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                graph[a].insert(b);
                graph[b].insert(a);
            }
        }
        parent[i] = nbrs.iter().map(|&u| position[u]).min();
        let mut bag = nbrs;
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
    }
    if n > 0 {
        let root = n - 1;
        for p in parent.iter_mut().take(root) {
            if p.is_none() {
                *p = Some(root);
            }
        }
    }
    (bags, parent)
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Contracts every tree edge whose one bag contains the other.
fn prune(bags: Vec<Vec<usize>>, parent: Vec<Option<usize>>, root: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>, usize) {
    let n = bags.len();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            adj[i].insert(p);
            adj[p].insert(i);
        }
    }
    let mut alive = vec![true; n];
    let mut root = root;

    loop {
        let mut changed = false;
        for i in 0..n {
            if !alive[i] {
                continue;
            }
            let target = adj[i].iter().copied().find(|&j| is_subset(&bags[i], &bags[j]));
            if let Some(j) = target {
                let nbrs: Vec<usize> = adj[i].iter().copied().filter(|&k| k != j).collect();
                for k in nbrs {
                    adj[k].remove(&i);
                    adj[k].insert(j);
                    adj[j].insert(k);
                }
                adj[j].remove(&i);
                adj[i].clear();
                alive[i] = false;
                if root == i {
                    root = j;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Orient from the root; children keep ascending original order.
    let mut new_id = vec![usize::MAX; n];
    let mut kept = Vec::new();
    let mut stack = vec![root];
    let mut visited = vec![false; n];
    visited[root] = true;
    while let Some(i) = stack.pop() {
        new_id[i] = kept.len();
        kept.push(i);
        for &k in adj[i].iter().rev() {
            if !visited[k] {
                visited[k] = true;
                stack.push(k);
            }
        }
    }
    let mut children = vec![Vec::new(); kept.len()];
    let mut seen = vec![false; n];
    for &i in &kept {
        seen[i] = true;
        for &k in &adj[i] {
            if !seen[k] {
                children[new_id[i]].push(new_id[k]);
            }
        }
    }
    let new_bags = kept.iter().map(|&i| bags[i].clone()).collect();
    (new_bags, children, 0)
}

/// Builds a semi-normalized tree decomposition of `h` with empty root and
/// leaf bags.
///
/// The primal graph is eliminated along a heuristic ordering, the buckets
/// are linked into a tree rooted at the last bucket, nested bags are
/// contracted and the result is semi-normalized. Deterministic in
/// `(h, heuristic, seed)`.
pub fn decompose(h: &Hypergraph, heuristic: Heuristic, seed: u64) -> Decomposition {
    let adj = h.primal_adjacency();
    let order = elimination_order(&adj, heuristic, seed);
    let (bags, parent) = bucket_tree(&adj, &order);
    let root = bags.len() - 1;
    let (bags, children, root) = prune(bags, parent, root);

    let nodes: Vec<DecompNode> = bags
        .into_iter()
        .zip(children)
        .map(|(bag, kids): (Vec<usize>, Vec<NodeId>)| {
            DecompNode::new(bag.into_iter().map(|v| VertexId(v as u32)).collect(), kids)
        })
        .collect();
    let raw = Decomposition::new(nodes, root).expect("bucket elimination yields a tree");
    semi_normalize(&raw, h).expect("bucket elimination yields a valid decomposition")
}
