use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomp::{decompose, Heuristic};
use crate::facts::{Fact, Instance};
use crate::hypergraph::build_hypergraph;
use crate::problems::{lookup, ProblemModule};

use super::OracleError;

/// Parameters of [`generate`].
#[derive(Clone, Debug, PartialEq)]
pub struct GenParams {
    /// One of the registered problem names.
    pub problem: String,
    /// Width the default heuristic must report for the result.
    pub width: usize,
    /// Number of vertices (for `sat`, clauses plus atoms).
    pub size: usize,
    /// Further augmentation attempts, as a fraction of `size`, made after
    /// the target width is reached; each is kept only if the width stays.
    pub extra_rate: f64,
    pub seed: u64,
}

impl GenParams {
    pub fn new(problem: &str, width: usize, size: usize, seed: u64) -> Self {
        GenParams {
            problem: problem.to_string(),
            width,
            size,
            extra_rate: 0.0,
            seed,
        }
    }

    pub fn with_extra_rate(mut self, rate: f64) -> Self {
        self.extra_rate = rate;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    /// `edge/2` between any two vertices.
    Graph,
    /// `pos/2` or `neg/2` between a clause and an atom.
    Incidence,
    /// `order/3` over three distinct vertices.
    Triples,
}

/// Working state: elements as vertex-index tuples plus primal adjacency.
struct Draft {
    shape: Shape,
    size: usize,
    /// For `Incidence`: whether a vertex is a clause.
    is_clause: Vec<bool>,
    /// Predicate name and members of every element, in insertion order.
    elements: Vec<(&'static str, Vec<usize>)>,
    member_sets: HashSet<Vec<usize>>,
    adj: Vec<BTreeSet<usize>>,
}

impl Draft {
    fn new(shape: Shape, size: usize) -> Self {
        Draft {
            shape,
            size,
            is_clause: vec![false; size],
            elements: Vec::new(),
            member_sets: HashSet::new(),
            adj: vec![BTreeSet::new(); size],
        }
    }

    fn name(&self, v: usize) -> String {
        match self.shape {
            Shape::Incidence if self.is_clause[v] => format!("c{v}"),
            Shape::Incidence => format!("x{v}"),
            _ => format!("v{v}"),
        }
    }

    fn key(members: &[usize]) -> Vec<usize> {
        let mut key = members.to_vec();
        key.sort_unstable();
        key
    }

    /// Adds an element unless one over the same members exists.
    fn push(&mut self, pred: &'static str, members: Vec<usize>) -> bool {
        if !self.member_sets.insert(Self::key(&members)) {
            return false;
        }
        for &a in &members {
            for &b in &members {
                if a != b {
                    self.adj[a].insert(b);
                }
            }
        }
        self.elements.push((pred, members));
        true
    }

    /// Removes the most recent element, rebuilding adjacency.
    fn pop(&mut self) {
        let (_, members) = self.elements.pop().expect("pop after push");
        self.member_sets.remove(&Self::key(&members));
        self.adj.iter_mut().for_each(BTreeSet::clear);
        for (_, members) in &self.elements {
            for &a in members {
                for &b in members {
                    if a != b {
                        self.adj[a].insert(b);
                    }
                }
            }
        }
    }

    fn instance(&self) -> Instance {
        self.elements
            .iter()
            .map(|(pred, members)| {
                let names: Vec<String> = members.iter().map(|&v| self.name(v)).collect();
                let args: Vec<&str> = names.iter().map(String::as_str).collect();
                Fact::parse_args(pred, &args).expect("generated names are identifiers")
            })
            .collect()
    }

    /// Vertices within `radius` steps of `start`, excluding it.
    fn ball(&self, start: usize, radius: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.size];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            if dist[u] == radius {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out
    }
}

fn width_of(draft: &Draft, module: &dyn ProblemModule) -> usize {
    let instance = draft.instance();
    let h = build_hypergraph(&instance, &module.edge_predicates(), &module.vertex_predicates())
        .expect("generated instances are well-formed");
    decompose(&h, Heuristic::default(), 0).width().max(0) as usize
}

fn literal(rng: &mut ChaCha8Rng) -> &'static str {
    if rng.random_bool(0.5) {
        "pos"
    } else {
        "neg"
    }
}

/// Random spanning structure of width 1 (width 2 for triples).
fn seed_structure(draft: &mut Draft, rng: &mut ChaCha8Rng) {
    match draft.shape {
        Shape::Graph => {
            for v in 1..draft.size {
                let p = rng.random_range(0..v);
                draft.push("edge", vec![p, v]);
            }
        }
        Shape::Incidence => {
            for v in 1..draft.size {
                let p = rng.random_range(0..v);
                draft.is_clause[v] = !draft.is_clause[p];
                let (c, a) = if draft.is_clause[v] { (v, p) } else { (p, v) };
                let pred = literal(rng);
                draft.push(pred, vec![c, a]);
            }
        }
        Shape::Triples => {
            let mut first = vec![0, 1, 2];
            first.shuffle(rng);
            draft.push("order", first);
            for v in 3..draft.size {
                let (_, anchor) = draft.elements.choose(rng).expect("nonempty");
                let mut pick: Vec<usize> = anchor.choose_multiple(rng, 2).copied().collect();
                pick.push(v);
                pick.shuffle(rng);
                draft.push("order", pick);
            }
        }
    }
}

/// Proposes one new element near a random vertex. Returns whether the
/// draft changed.
fn augment(draft: &mut Draft, rng: &mut ChaCha8Rng) -> bool {
    let u = rng.random_range(0..draft.size);
    match draft.shape {
        Shape::Graph => {
            let near: Vec<usize> = draft
                .ball(u, 2)
                .into_iter()
                .filter(|w| !draft.adj[u].contains(w))
                .collect();
            match near.choose(rng) {
                Some(&w) => draft.push("edge", vec![u, w]),
                None => false,
            }
        }
        Shape::Incidence => {
            let near: Vec<usize> = draft
                .ball(u, 3)
                .into_iter()
                .filter(|&w| draft.is_clause[w] != draft.is_clause[u] && !draft.adj[u].contains(&w))
                .collect();
            match near.choose(rng) {
                Some(&w) => {
                    let (c, a) = if draft.is_clause[u] { (u, w) } else { (w, u) };
                    let pred = literal(rng);
                    draft.push(pred, vec![c, a])
                }
                None => false,
            }
        }
        Shape::Triples => {
            let near = draft.ball(u, 2);
            if near.len() < 2 {
                return false;
            }
            let mut pick: Vec<usize> = near.choose_multiple(rng, 2).copied().collect();
            pick.push(u);
            pick.shuffle(rng);
            draft.push("order", pick)
        }
    }
}

/// Generates a tree-like instance whose decomposition under the default
/// heuristic (seed 0) has exactly `params.width`.
///
/// A random spanning tree (a chain of triangles for `cyclic`) is grown by
/// elements confined to small neighbourhoods of a random vertex; an
/// element that pushes the measured width past the target is withdrawn.
/// The result depends only on `params`.
pub fn generate(params: &GenParams) -> Result<Instance, OracleError> {
    let module = lookup(&params.problem)
        .map_err(|_| OracleError::UnknownProblem(params.problem.clone()))?;
    let shape = match params.problem.as_str() {
        "sat" => Shape::Incidence,
        "cyclic" => Shape::Triples,
        _ => Shape::Graph,
    };
    let min_width = if shape == Shape::Triples { 2 } else { 1 };
    if params.width < min_width {
        return Err(OracleError::InvalidParams(format!(
            "width must be at least {min_width} for `{}`",
            params.problem
        )));
    }
    if params.size < params.width + 1 {
        return Err(OracleError::InvalidParams(format!(
            "size {} cannot reach width {} (needs at least width + 1 vertices)",
            params.size, params.width
        )));
    }
    if !(0.0..=1000.0).contains(&params.extra_rate) {
        return Err(OracleError::InvalidParams(format!(
            "extra rate {} out of range",
            params.extra_rate
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut draft = Draft::new(shape, params.size);
    seed_structure(&mut draft, &mut rng);

    let budget = 40 * params.size + 400;
    let mut width = width_of(&draft, module);
    let mut attempts = 0;
    while width < params.width {
        if attempts == budget {
            return Err(OracleError::GenerationFailed {
                target: params.width,
                reached: width,
                attempts,
            });
        }
        attempts += 1;
        if !augment(&mut draft, &mut rng) {
            continue;
        }
        let w = width_of(&draft, module);
        if w > params.width {
            draft.pop();
        } else {
            width = w;
        }
    }

    let extras = (params.extra_rate * params.size as f64).round() as usize;
    for _ in 0..extras {
        if augment(&mut draft, &mut rng) && width_of(&draft, module) != params.width {
            draft.pop();
        }
    }
    Ok(draft.instance())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measured(problem: &str, instance: &Instance) -> usize {
        let module = lookup(problem).unwrap();
        let h = build_hypergraph(instance, &module.edge_predicates(), &module.vertex_predicates())
            .unwrap();
        decompose(&h, Heuristic::default(), 0).width() as usize
    }

    #[test]
    fn graph_width_two() {
        let inst = generate(&GenParams::new("3col", 2, 20, 1)).unwrap();
        assert_eq!(measured("3col", &inst), 2);
    }

    #[test]
    fn deterministic() {
        let p = GenParams::new("minvc", 3, 25, 9).with_extra_rate(0.5);
        assert_eq!(generate(&p).unwrap().to_string(), generate(&p).unwrap().to_string());
    }

    #[test]
    fn every_shape_hits_its_width() {
        for (problem, width, size) in [("sat", 3, 40), ("cyclic", 3, 15), ("minvc", 1, 10), ("cyclic", 2, 6)] {
            for seed in 0..3 {
                let inst = generate(&GenParams::new(problem, width, size, seed)).unwrap();
                assert_eq!(measured(problem, &inst), width, "{problem} seed {seed}");
            }
        }
    }

    #[test]
    fn sat_instances_are_bipartite() {
        let inst = generate(&GenParams::new("sat", 2, 30, 4)).unwrap();
        for f in inst.facts() {
            assert!(f.predicate() == "pos" || f.predicate() == "neg");
            assert!(f.args()[0].as_str().starts_with('c'));
            assert!(f.args()[1].as_str().starts_with('x'));
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(matches!(
            generate(&GenParams::new("3col", 4, 4, 0)),
            Err(OracleError::InvalidParams(_))
        ));
        assert!(matches!(
            generate(&GenParams::new("cyclic", 1, 10, 0)),
            Err(OracleError::InvalidParams(_))
        ));
        assert!(matches!(
            generate(&GenParams::new("foo", 1, 10, 0)),
            Err(OracleError::UnknownProblem(_))
        ));
    }

    #[test]
    fn unreachable_width_gives_up() {
        // Two clauses and two atoms form at most K(2,2), of width 2.
        assert!(matches!(
            generate(&GenParams::new("sat", 3, 4, 0)),
            Err(OracleError::GenerationFailed { reached: 2, .. })
        ));
    }
}
