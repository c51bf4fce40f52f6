//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Runs without the libtest harness so it can install a
//! counting allocator and print its own report.

use std::alloc::{GlobalAlloc, Layout, System};
use std::io::Write as _;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treedp::engine::{compute_tables, materialize, Extension, Value};
use treedp::oracle::{brute_force, exact_treewidth, generate, small_instance, GenParams, Summary};
use treedp::{
    build_hypergraph, decompose, lookup, read_decomposition, solve, validate, Heuristic, Hypergraph,
    Instance, PredicateKey, ProblemType, SolveResult, PROBLEM_NAMES,
};

// ---------------------------------------------------------------------------
// allocation accounting

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static ALLOC: Counting = Counting;

/// Starts a measurement window; returns the baseline.
fn reset_peak() -> usize {
    let now = CURRENT.load(Ordering::Relaxed);
    PEAK.store(now, Ordering::Relaxed);
    now
}

// ---------------------------------------------------------------------------
// shared inputs

const EXAMPLE: &str = "\
vertex(a). vertex(b). vertex(c). vertex(d). vertex(e).
edge(a,b). edge(a,c). edge(b,c). edge(b,d). edge(c,d). edge(d,e).
";

const EXAMPLE_TD: &str = "\
td 8 0
node 0
node 1 b c d
node 2 b c d
node 3 b c d
node 4 a b c
node 5 d e
node 6
node 7
arc 0 1
arc 1 2
arc 1 3
arc 2 4
arc 3 5
arc 4 6
arc 5 7
";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn parse(text: &str) -> Instance {
    text.parse().expect("acceptance instance parses")
}

fn hypergraph(inst: &Instance, problem: &str) -> Hypergraph {
    let m = lookup(problem).unwrap();
    build_hypergraph(inst, &m.edge_predicates(), &m.vertex_predicates()).unwrap()
}

fn engine(inst: &Instance, problem: &str, ty: ProblemType) -> Result<Summary, String> {
    let h = hypergraph(inst, problem);
    let d = decompose(&h, Heuristic::MinFill, 0);
    solve(inst, &h, &d, lookup(problem).unwrap(), ty)
        .map(Summary::from)
        .map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// criteria

fn example_tables() -> Outcome {
    let start = Instant::now();
    let inst = parse(EXAMPLE);
    let h = hypergraph(&inst, "3col");
    let d = read_decomposition(EXAMPLE_TD, &h).map_err(|e| e.to_string())?;
    ensure(validate(&d, &h).is_valid(), "example decomposition does not validate")?;
    let tables =
        compute_tables(&inst, &h, &d, lookup("3col").unwrap(), ProblemType::Enumeration).map_err(|e| e.to_string())?;

    let perms: Vec<Vec<Value>> = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]]
        .iter()
        .map(|p| p.iter().map(|&c| Value(c)).collect())
        .collect();
    // the join node and its two exchange children share the bag {b,c,d}
    for node in 1..=3 {
        let values: Vec<Vec<Value>> = tables.table(node).rows().iter().map(|r| r.values.clone()).collect();
        ensure(values == perms, format!("node {node} rows are not the six colour permutations"))?;
    }
    for (i, row) in tables.table(1).rows().iter().enumerate() {
        ensure(
            row.extensions == [Extension::Pair(i as u32, i as u32)],
            format!("join row {i} has extensions {:?}", row.extensions),
        )?;
    }
    // exchange pointers: each row points at the child rows agreeing on the shared vertices
    let singles = |node: usize| -> Vec<Vec<u32>> {
        tables
            .table(node)
            .rows()
            .iter()
            .map(|r| {
                r.extensions
                    .iter()
                    .filter_map(|e| match e {
                        Extension::Single(i) => Some(*i),
                        Extension::Pair(..) => None,
                    })
                    .collect()
            })
            .collect()
    };
    ensure(
        singles(2) == [vec![4], vec![2], vec![5], vec![0], vec![3], vec![1]],
        format!("node 2 pointers {:?}", singles(2)),
    )?;
    ensure(
        singles(3) == [vec![4, 5], vec![2, 3], vec![4, 5], vec![0, 1], vec![2, 3], vec![0, 1]],
        format!("node 3 pointers {:?}", singles(3)),
    )?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("6 rows at each {b,c,d} node, join extensions (i,i)".into())
}

fn colouring_counts() -> Outcome {
    let start = Instant::now();
    let base = engine(&parse(EXAMPLE), "3col", ProblemType::Counting)?;
    ensure(base == Summary::Count(12u32.into()), format!("example count {base:?}"))?;
    let more = engine(&parse(&format!("{EXAMPLE} edge(a,d).")), "3col", ProblemType::Counting)?;
    ensure(more == Summary::Count(0u32.into()), format!("with edge(a,d): {more:?}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("12 colourings, 0 after adding edge(a,d)".into())
}

fn oracle_sweep() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for problem in PROBLEM_NAMES {
        let module = lookup(problem).unwrap();
        for seed in 0..100 {
            let inst = small_instance(problem, seed).map_err(|e| e.to_string())?;
            for ty in ProblemType::ALL.into_iter().filter(|&t| module.supports(t)) {
                let want = brute_force(&inst, problem, ty).map(Summary::from).map_err(|e| e.to_string())?;
                let got = engine(&inst, problem, ty)?;
                ensure(got == want, format!("{problem} {ty} seed {seed}: engine {got:?}, oracle {want:?}"))?;
                checked += 1;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{checked} (instance, problem type) pairs agree over 4x100 instances"))
}

fn cover_optimum() -> Outcome {
    let start = Instant::now();
    let inst = parse(EXAMPLE);
    let opt = engine(&inst, "minvc", ProblemType::OptValue)?;
    ensure(opt == Summary::Optimum(Some(3)), format!("opt-value {opt:?}"))?;
    let Summary::Solutions(all) =
        brute_force(&inst, "minvc", ProblemType::Enumeration).map(Summary::from).map_err(|e| e.to_string())?
    else {
        return Err("oracle did not enumerate".into());
    };
    let size3 = all.iter().filter(|s| s.0.values().filter(|v| *v == "in").count() == 3).count();
    let counted = engine(&inst, "minvc", ProblemType::OptCounting)?;
    ensure(
        counted == Summary::OptimumCount { optimum: Some(3), count: size3.into() },
        format!("opt-counting {counted:?}, brute-force size-3 covers {size3}"),
    )?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("optimum 3, {size3} optimal covers"))
}

fn cyclic_orders() -> Outcome {
    let start = Instant::now();
    let yes = engine(&parse("order(a,b,c)."), "cyclic", ProblemType::Decision)?;
    ensure(yes == Summary::Decision(true), format!("single triple: {yes:?}"))?;
    let no = engine(&parse("order(a,b,c). order(c,b,a)."), "cyclic", ProblemType::Decision)?;
    ensure(no == Summary::Decision(false), format!("opposed triples: {no:?}"))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok("yes / no".into())
}

/// Random hypergraph text with up to `max_n` vertices and edges of arity 1
/// to 4 under predicates h1/1 .. h4/4.
fn random_hypergraph_text(seed: u64, max_n: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=max_n);
    let m = rng.random_range(0..=2 * n);
    let mut text = String::from("vertex(v0). ");
    for v in 1..n {
        if rng.random_bool(0.3) {
            text.push_str(&format!("vertex(v{v}). "));
        }
    }
    for _ in 0..m {
        let arity = rng.random_range(1..=4usize);
        let args: Vec<String> = (0..arity).map(|_| format!("v{}", rng.random_range(0..n))).collect();
        text.push_str(&format!("h{arity}({}). ", args.join(",")));
    }
    text
}

fn hypergraph_of_text(text: &str) -> Hypergraph {
    let edges: Vec<PredicateKey> = (1..=4).map(|a| PredicateKey::new(format!("h{a}"), a)).collect();
    build_hypergraph(&parse(text), &edges, &[PredicateKey::new("vertex", 1)]).unwrap()
}

fn decomposition_validity() -> Outcome {
    let start = Instant::now();
    let (mut small, mut optimal) = (0, 0);
    for seed in 0..1000 {
        let h = hypergraph_of_text(&random_hypergraph_text(seed, 30));
        for heuristic in [Heuristic::MinFill, Heuristic::MinDegree] {
            let report = validate(&decompose(&h, heuristic, seed), &h);
            ensure(report.is_valid(), format!("seed {seed} {heuristic:?}: {report}"))?;
        }
        if h.vertex_count() <= 7 {
            small += 1;
            let tw = exact_treewidth(&h.primal_adjacency()).map_err(|e| e.to_string())? as i64;
            if decompose(&h, Heuristic::MinFill, seed).width() == tw {
                optimal += 1;
            }
        }
    }
    ensure(small > 0, "no hypergraph with at most 7 vertices was drawn")?;
    let rate = optimal as f64 / small as f64;
    ensure(rate >= 0.90, format!("min-fill optimal on {optimal}/{small} small graphs"))?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "1000 hypergraphs x 2 heuristics valid; min-fill optimal on {optimal}/{small} ({:.1}%) small graphs",
        100.0 * rate
    ))
}

fn sat_scaling() -> Outcome {
    let mut times = Vec::new();
    for size in [100, 200, 400] {
        let inst = generate(&GenParams::new("sat", 8, size, 7)).map_err(|e| e.to_string())?;
        let module = lookup("sat").unwrap();
        let mut best = Duration::MAX;
        for _ in 0..5 {
            let start = Instant::now();
            let h = build_hypergraph(&inst, &module.edge_predicates(), &module.vertex_predicates())
                .map_err(|e| e.to_string())?;
            let d = decompose(&h, Heuristic::MinFill, 0);
            ensure(d.width() == 8, format!("size {size}: width {}", d.width()))?;
            let result = solve(&inst, &h, &d, module, ProblemType::Counting).map_err(|e| e.to_string())?;
            ensure(matches!(result, SolveResult::Counting(_)), "counting produced no count")?;
            let elapsed = start.elapsed();
            within(elapsed, Duration::from_secs(30))?;
            best = best.min(elapsed);
        }
        times.push(best);
    }
    let ratio = times[2].as_secs_f64() / times[0].as_secs_f64();
    ensure(ratio < 16.0, format!("t(400)/t(100) = {ratio:.2}"))?;
    Ok(format!(
        "t(100)={:.1?} t(200)={:.1?} t(400)={:.1?}, ratio {ratio:.2} < 16",
        times[0], times[1], times[2]
    ))
}

/// First generated 3-colouring instance (width 2) with between 10^4 and
/// 10^5 colourings.
fn many_colourings() -> Result<(Instance, u64), String> {
    for size in 12..40 {
        for seed in 0..20 {
            let inst = generate(&GenParams::new("3col", 2, size, seed)).map_err(|e| e.to_string())?;
            if let Summary::Count(n) = engine(&inst, "3col", ProblemType::Counting)? {
                let n = u64::try_from(n).unwrap_or(u64::MAX);
                if (10_000..=100_000).contains(&n) {
                    return Ok((inst, n));
                }
            }
        }
    }
    Err("no generated instance with 10^4..10^5 colourings".into())
}

fn enumeration_delay() -> Outcome {
    let (inst, total) = many_colourings()?;
    let module = lookup("3col").unwrap();
    let h = hypergraph(&inst, "3col");
    let d = decompose(&h, Heuristic::MinFill, 0);
    let tables = |_: ()| compute_tables(&inst, &h, &d, module, ProblemType::Enumeration).map_err(|e| e.to_string());

    // First 100 solutions, consumed one at a time.
    let start = Instant::now();
    let first_tables = tables(())?;
    let base = reset_peak();
    let SolveResult::Enumeration(stream) = materialize(first_tables, module) else {
        return Err("enumeration produced no stream".into());
    };
    let mut seen = 0;
    for solution in stream.take(100) {
        ensure(solution.len() == h.vertex_count(), "partial solution")?;
        seen += 1;
    }
    let streamed_peak = PEAK.load(Ordering::Relaxed) - base;
    let elapsed = start.elapsed();
    ensure(seen == 100, format!("stream stopped after {seen} solutions"))?;
    within(elapsed, Duration::from_secs(10))?;

    // The full set, held at once, for comparison.
    let all_tables = tables(())?;
    let base = CURRENT.load(Ordering::Relaxed);
    let SolveResult::Enumeration(stream) = materialize(all_tables, module) else {
        return Err("enumeration produced no stream".into());
    };
    let all: Vec<_> = stream.collect();
    let full = CURRENT.load(Ordering::Relaxed).saturating_sub(base);
    ensure(all.len() as u64 == total, format!("enumerated {} of {total}", all.len()))?;
    drop(all);

    ensure(
        streamed_peak.saturating_mul(100) <= full,
        format!("streaming peak {streamed_peak} B exceeds 1% of the full set's {full} B"),
    )?;
    Ok(format!(
        "{total} colourings; first 100 in {elapsed:.1?} with peak {streamed_peak} B vs {full} B for the full set"
    ))
}

// ---------------------------------------------------------------------------
// determinism

fn invocations() -> Result<Vec<(Vec<String>, String)>, String> {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let td = dir.join("acceptance-example.td");
    std::fs::write(&td, EXAMPLE_TD).map_err(|e| e.to_string())?;
    let args = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();

    let mut list = vec![
        (
            [args("--problem 3col -p enumeration --decomposition"), vec![td.display().to_string()]].concat(),
            EXAMPLE.to_string(),
        ),
        (args("--problem 3col -p counting"), EXAMPLE.to_string()),
        (args("--problem 3col -p enumeration --heuristic min-degree --seed 3"), EXAMPLE.to_string()),
        (args("--problem 3col -p counting"), format!("{EXAMPLE} edge(a,d).")),
        (args("--problem minvc -p opt-value"), EXAMPLE.to_string()),
        (args("--problem minvc -p opt-counting"), EXAMPLE.to_string()),
        (args("--problem minvc -p opt-enum"), EXAMPLE.to_string()),
        (args("--problem cyclic -p decision"), "order(a,b,c).".to_string()),
        (args("--problem cyclic -p decision"), "order(a,b,c). order(c,b,a).".to_string()),
    ];
    for problem in PROBLEM_NAMES {
        for seed in 0..3 {
            let inst = small_instance(problem, seed).map_err(|e| e.to_string())?;
            let ty = if problem == "cyclic" { "decision" } else { "enumeration" };
            list.push((args(&format!("--problem {problem} -p {ty} --seed {seed}")), inst.to_string()));
        }
    }
    let edges = "-e h1/1 -e h2/2 -e h3/3 -e h4/4 -v vertex/1";
    for seed in 0..3 {
        list.push((
            args(&format!("--problem 3col --width-only --seed {seed} {edges}")),
            random_hypergraph_text(seed, 30),
        ));
    }
    let sat = generate(&GenParams::new("sat", 8, 100, 7)).map_err(|e| e.to_string())?;
    list.push((args("--problem sat -p counting"), sat.to_string()));
    let (colouring, _) = many_colourings()?;
    list.push((args("--problem 3col -p enumeration --limit 100"), colouring.to_string()));
    Ok(list)
}

fn spawn(args: &[String], stdin: &str) -> Result<(Vec<u8>, i32), String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_treedp"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| e.to_string())?;
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code().unwrap_or(-1)))
}

fn determinism() -> Outcome {
    let list = invocations()?;
    for (args, stdin) in &list {
        let argv = std::iter::once("treedp".to_string()).chain(args.iter().cloned());
        let a = treedp_cli::run(argv.clone(), stdin);
        let b = treedp_cli::run(argv, stdin);
        ensure(a.status == 0, format!("{args:?} exited {}: {}", a.status, a.stderr))?;
        ensure(a.stdout == b.stdout, format!("{args:?}: in-process runs differ"))?;
        let (x, sx) = spawn(args, stdin)?;
        let (y, sy) = spawn(args, stdin)?;
        ensure(sx == 0 && sy == 0, format!("{args:?}: binary exited {sx}/{sy}"))?;
        ensure(x == y, format!("{args:?}: binary runs differ"))?;
        ensure(x == a.stdout.as_bytes(), format!("{args:?}: binary and in-process output differ"))?;
    }
    Ok(format!("{} invocations byte-identical across runs and processes", list.len()))
}

// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("example tables reproduced", example_tables),
        ("3-colouring counts", colouring_counts),
        ("oracle equivalence sweep", oracle_sweep),
        ("minimum vertex cover", cover_optimum),
        ("cyclic ordering decisions", cyclic_orders),
        ("decomposition validity", decomposition_validity),
        ("SAT counting scales at width 8", sat_scaling),
        ("enumeration delay and memory", enumeration_delay),
        ("CLI determinism", determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|payload| {
            let msg = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
