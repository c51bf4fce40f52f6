use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::facts::{Fact, Instance};

use super::OracleError;

fn fact(pred: &str, args: &[String]) -> Fact {
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    Fact::parse_args(pred, &args).expect("generated names are identifiers")
}

/// A random instance small enough for [`brute_force`](super::brute_force):
/// graphs with up to 8 vertices, formulas with up to 6 atoms and 4
/// clauses, cyclic-ordering instances with up to 6 vertices and 4 triples.
///
/// Unlike [`generate`](super::generate) these are unstructured: they may be
/// disconnected, contain isolated vertices, self-loops, tautological
/// clauses or contradictory triples.
pub fn small_instance(problem: &str, seed: u64) -> Result<Instance, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inst = Instance::new();
    match problem {
        "3col" | "minvc" => {
            let n = rng.random_range(1..=8usize);
            let density = rng.random_range(0.1..0.7);
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            for (i, a) in names.iter().enumerate() {
                if i == 0 || rng.random_bool(0.8) {
                    inst.insert(fact("vertex", std::slice::from_ref(a)));
                }
                for b in &names[i + 1..] {
                    if rng.random_bool(density) {
                        let pair = if rng.random_bool(0.5) { [a.clone(), b.clone()] } else { [b.clone(), a.clone()] };
                        inst.insert(fact("edge", &pair));
                    }
                }
            }
            if rng.random_bool(0.05) {
                let v = names.choose(&mut rng).unwrap().clone();
                inst.insert(fact("edge", &[v.clone(), v]));
            }
        }
        "sat" => {
            let atoms: Vec<String> = (0..rng.random_range(1..=6)).map(|i| format!("x{i}")).collect();
            let clauses: Vec<String> = (0..rng.random_range(1..=4)).map(|i| format!("c{i}")).collect();
            for a in &atoms {
                if rng.random_bool(0.5) {
                    inst.insert(fact("atom", std::slice::from_ref(a)));
                }
            }
            for c in &clauses {
                let len = rng.random_range(0..=3usize).min(atoms.len());
                if len == 0 {
                    inst.insert(fact("clause", std::slice::from_ref(c)));
                }
                for a in atoms.choose_multiple(&mut rng, len) {
                    let pred = if rng.random_bool(0.5) { "pos" } else { "neg" };
                    inst.insert(fact(pred, &[c.clone(), a.clone()]));
                }
                if rng.random_bool(0.05) {
                    let a = atoms.choose(&mut rng).unwrap();
                    inst.insert(fact("pos", &[c.clone(), a.clone()]));
                    inst.insert(fact("neg", &[c.clone(), a.clone()]));
                }
            }
        }
        "cyclic" => {
            let n = rng.random_range(3..=6usize);
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            for v in &names {
                inst.insert(fact("vertex", std::slice::from_ref(v)));
            }
            for _ in 0..rng.random_range(1..=4) {
                let mut triple: Vec<String> = names.choose_multiple(&mut rng, 3).cloned().collect();
                triple.shuffle(&mut rng);
                inst.insert(fact("order", &triple));
            }
        }
        other => return Err(OracleError::UnknownProblem(other.to_string())),
    }
    Ok(inst)
}

/// Exact treewidth of a graph given by adjacency sets, by dynamic
/// programming over vertex subsets. Graphs without edges have width 0.
///
/// Intended for small graphs; larger than 20 vertices is refused.
pub fn exact_treewidth(adj: &[BTreeSet<usize>]) -> Result<usize, OracleError> {
    let n = adj.len();
    if n > 20 {
        return Err(OracleError::TooLarge { limit: 1 << 20 });
    }
    if n == 0 {
        return Ok(0);
    }
    let masks: Vec<u32> = adj
        .iter()
        .map(|nbrs| nbrs.iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    // Vertices outside `set ∪ {v}` reachable from v through `set`.
    let q = |set: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(u) = stack.pop() {
            let mut nb = masks[u] & !seen;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                seen |= 1 << w;
                if set & (1 << w) != 0 {
                    stack.push(w);
                } else {
                    out |= 1 << w;
                }
            }
        }
        out
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![usize::MAX; 1usize << n];
    tw[0] = 0;
    for set in 1..=full {
        let mut best = usize::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = set & !(1 << v);
            let cand = tw[without as usize].max(q(without, v).count_ones() as usize);
            best = best.min(cand);
        }
        tw[set as usize] = best;
    }
    Ok(tw[full as usize])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        adj
    }

    #[test]
    fn known_widths() {
        assert_eq!(exact_treewidth(&graph(3, &[])).unwrap(), 0);
        assert_eq!(exact_treewidth(&graph(4, &[(0, 1), (1, 2), (2, 3)])).unwrap(), 1);
        assert_eq!(exact_treewidth(&graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])).unwrap(), 2);
        let k5: Vec<(usize, usize)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        assert_eq!(exact_treewidth(&graph(5, &k5)).unwrap(), 4);
        // 3x3 grid
        let mut grid = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if c < 2 {
                    grid.push((3 * r + c, 3 * r + c + 1));
                }
                if r < 2 {
                    grid.push((3 * r + c, 3 * r + c + 3));
                }
            }
        }
        assert_eq!(exact_treewidth(&graph(9, &grid)).unwrap(), 3);
    }

    #[test]
    fn small_instances_are_deterministic_and_bounded() {
        for problem in ["3col", "minvc", "sat", "cyclic"] {
            for seed in 0..50 {
                let a = small_instance(problem, seed).unwrap();
                assert_eq!(a.to_string(), small_instance(problem, seed).unwrap().to_string());
                assert!(!a.is_empty());
            }
        }
    }
}
