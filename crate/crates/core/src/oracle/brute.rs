use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;

use crate::engine::{ProblemType, Solution, SolveResult};
use crate::facts::Instance;
use crate::problems::{cyclically_ordered, next_permutation, PROBLEM_NAMES};

use super::OracleError;

/// Largest number of candidate assignments (or orderings) searched.
pub const SEARCH_LIMIT: u128 = 10_000_000;

/// A checked-out candidate: reported entries plus its cost, when the
/// problem has one.
struct Candidate {
    solution: Solution,
    cost: Option<u64>,
}

/// Solves `instance` by exhaustive search, reading the instance facts
/// directly rather than going through the hypergraph and decomposition
/// code.
///
/// The optimization types are offered for `minvc` only and `cyclic` has no
/// optimization variant; in both cases the error mirrors the engine's.
pub fn brute_force(
    instance: &Instance,
    problem: &str,
    problem_type: ProblemType,
) -> Result<SolveResult<'static>, OracleError> {
    if !PROBLEM_NAMES.contains(&problem) {
        return Err(OracleError::UnknownProblem(problem.to_string()));
    }
    if problem_type.is_optimization() && problem != "minvc" {
        return Err(OracleError::Unsupported {
            problem: problem.to_string(),
            problem_type,
        });
    }
    let candidates = match problem {
        "3col" => coloring(instance)?,
        "minvc" => vertex_cover(instance)?,
        "sat" => models(instance)?,
        _ => cyclic_orders(instance)?,
    };
    Ok(summarize(candidates, problem_type))
}

fn summarize(candidates: Vec<Candidate>, problem_type: ProblemType) -> SolveResult<'static> {
    let best = candidates.iter().filter_map(|c| c.cost).min();
    let optimal = |c: &Candidate| c.cost == best;
    match problem_type {
        ProblemType::Decision => SolveResult::Decision(!candidates.is_empty()),
        ProblemType::Counting => SolveResult::Counting(BigUint::from(candidates.len())),
        ProblemType::Enumeration => SolveResult::Enumeration(Box::new(
            candidates.into_iter().map(|c| c.solution),
        )),
        ProblemType::OptValue => SolveResult::OptValue(best),
        ProblemType::OptCounting => SolveResult::OptCounting {
            optimum: best,
            count: BigUint::from(candidates.iter().filter(|c| optimal(c)).count()),
        },
        ProblemType::OptEnum => {
            let solutions: Vec<Solution> = candidates
                .into_iter()
                .filter(|c| c.cost == best)
                .map(|c| c.solution)
                .collect();
            SolveResult::OptEnum {
                optimum: best,
                solutions: Box::new(solutions.into_iter()),
            }
        }
    }
}

/// Arguments of every `pred/arity` fact.
fn tuples<'i>(instance: &'i Instance, pred: &str, arity: usize) -> Vec<Vec<&'i str>> {
    instance
        .facts_of(pred, arity)
        .into_iter()
        .map(|f| f.args().iter().map(|c| c.as_str()).collect())
        .collect()
}

fn guard(base: u128, n: usize) -> Result<(), OracleError> {
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(base);
        if total > SEARCH_LIMIT {
            return Err(OracleError::TooLarge { limit: SEARCH_LIMIT });
        }
    }
    Ok(())
}

/// Vertices of a graph instance (`edge/2` endpoints and `vertex/1`), and
/// its edges as index pairs.
fn graph(instance: &Instance) -> (Vec<&str>, Vec<(usize, usize)>) {
    let edges = tuples(instance, "edge", 2);
    let names: BTreeSet<&str> = edges
        .iter()
        .flatten()
        .copied()
        .chain(tuples(instance, "vertex", 1).into_iter().flatten())
        .collect();
    let names: Vec<&str> = names.into_iter().collect();
    let index = |n: &str| names.binary_search(&n).expect("collected above");
    let pairs = edges.iter().map(|e| (index(e[0]), index(e[1]))).collect();
    (names, pairs)
}

/// Odometer over `base^n` assignments, calling `visit` on each.
fn for_each_assignment(n: usize, base: u16, mut visit: impl FnMut(&[u16])) {
    let mut digits = vec![0u16; n];
    loop {
        visit(&digits);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            digits[i] += 1;
            if digits[i] < base {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

fn solution(names: &[&str], values: impl Iterator<Item = String>) -> Solution {
    Solution(names.iter().map(|n| n.to_string()).zip(values).collect::<BTreeMap<_, _>>())
}

fn coloring(instance: &Instance) -> Result<Vec<Candidate>, OracleError> {
    const COLORS: [&str; 3] = ["red", "green", "blue"];
    let (names, edges) = graph(instance);
    guard(3, names.len())?;
    let mut out = Vec::new();
    for_each_assignment(names.len(), 3, |colors| {
        if edges.iter().all(|&(a, b)| colors[a] != colors[b]) {
            out.push(Candidate {
                solution: solution(&names, colors.iter().map(|&c| COLORS[c as usize].to_string())),
                cost: None,
            });
        }
    });
    Ok(out)
}

fn vertex_cover(instance: &Instance) -> Result<Vec<Candidate>, OracleError> {
    let (names, edges) = graph(instance);
    guard(2, names.len())?;
    let mut out = Vec::new();
    for_each_assignment(names.len(), 2, |bits| {
        let chosen = |v: usize| bits[v] == 1;
        if edges.iter().all(|&(a, b)| chosen(a) || chosen(b)) {
            out.push(Candidate {
                solution: solution(
                    &names,
                    bits.iter().map(|&b| if b == 1 { "in" } else { "out" }.to_string()),
                ),
                cost: Some(bits.iter().filter(|&&b| b == 1).count() as u64),
            });
        }
    });
    Ok(out)
}

fn models(instance: &Instance) -> Result<Vec<Candidate>, OracleError> {
    let pos = tuples(instance, "pos", 2);
    let neg = tuples(instance, "neg", 2);
    let literals = pos.iter().map(|t| (t, true)).chain(neg.iter().map(|t| (t, false)));

    let mut clauses: BTreeSet<&str> = tuples(instance, "clause", 1).into_iter().flatten().collect();
    let mut atoms: BTreeSet<&str> = tuples(instance, "atom", 1).into_iter().flatten().collect();
    for (t, _) in literals.clone() {
        clauses.insert(t[0]);
        atoms.insert(t[1]);
    }
    if let Some(both) = clauses.intersection(&atoms).next() {
        return Err(OracleError::Instance(format!(
            "`{both}` is used both as a clause and as an atom"
        )));
    }
    let atoms: Vec<&str> = atoms.into_iter().collect();
    let clause_index: Vec<&str> = clauses.into_iter().collect();
    // For each clause, its literals as (atom index, satisfying value).
    let mut by_clause: Vec<Vec<(usize, u16)>> = vec![Vec::new(); clause_index.len()];
    for (t, positive) in literals {
        let c = clause_index.binary_search(&t[0]).expect("collected above");
        let a = atoms.binary_search(&t[1]).expect("collected above");
        by_clause[c].push((a, u16::from(positive)));
    }

    guard(2, atoms.len())?;
    let mut out = Vec::new();
    for_each_assignment(atoms.len(), 2, |bits| {
        if by_clause
            .iter()
            .all(|lits| lits.iter().any(|&(a, want)| bits[a] == want))
        {
            out.push(Candidate {
                solution: solution(
                    &atoms,
                    bits.iter().map(|&b| if b == 1 { "true" } else { "false" }.to_string()),
                ),
                cost: None,
            });
        }
    });
    Ok(out)
}

fn cyclic_orders(instance: &Instance) -> Result<Vec<Candidate>, OracleError> {
    let triples = tuples(instance, "order", 3);
    let names: BTreeSet<&str> = triples
        .iter()
        .flatten()
        .copied()
        .chain(tuples(instance, "vertex", 1).into_iter().flatten())
        .collect();
    let names: Vec<&str> = names.into_iter().collect();
    let index = |n: &str| names.binary_search(&n).expect("collected above");
    let triples: Vec<[usize; 3]> = triples
        .iter()
        .map(|t| [index(t[0]), index(t[1]), index(t[2])])
        .collect();

    let mut orderings: u128 = 1;
    for k in 1..=names.len() as u128 {
        orderings = orderings.saturating_mul(k);
        if orderings > SEARCH_LIMIT {
            return Err(OracleError::TooLarge { limit: SEARCH_LIMIT });
        }
    }
    let mut out = Vec::new();
    let mut rank: Vec<u16> = (0..names.len() as u16).collect();
    loop {
        if triples
            .iter()
            .all(|&[a, b, c]| cyclically_ordered(rank[a], rank[b], rank[c]))
        {
            out.push(Candidate {
                solution: solution(&names, rank.iter().map(|r| (r + 1).to_string())),
                cost: None,
            });
        }
        if !next_permutation(&mut rank) {
            break;
        }
    }
    Ok(out)
}
