//! Command-line front end: reads an instance from stdin, builds or loads a
//! tree decomposition and prints the requested result.
//!
//! [`run`] holds the whole program so it can be driven from tests; the
//! binary only forwards the process arguments and streams.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use treedp::decomp::Condition;
use treedp::{
    build_hypergraph, decompose, lookup, parse_instance, read_decomposition, semi_normalize,
    solve, validate, write_decomposition, Decomposition, Heuristic, Hypergraph, Instance,
    PredicateKey, ProblemType, SolveResult,
};

/// Exit status for malformed command lines, unknown problems and problem
/// types a module does not offer.
pub const EXIT_USAGE: i32 = 1;
/// Exit status for unreadable instances or decompositions and failed solves.
pub const EXIT_INPUT: i32 = 2;

/// Engine-internal predicate names that may not appear in an instance.
pub const RESERVED: [(&str, usize); 15] = [
    ("current", 1),
    ("introduced", 1),
    ("removed", 1),
    ("childTuple", 1),
    ("childTupleL", 1),
    ("childTupleR", 1),
    ("mapped", 3),
    ("childCost", 2),
    ("root", 0),
    ("map", 2),
    ("chosenChildTuple", 1),
    ("chosenChildTupleL", 1),
    ("chosenChildTupleR", 1),
    ("cost", 1),
    ("currentCost", 1),
];

#[derive(Parser, Debug)]
#[command(
    name = "treedp",
    version,
    about = "Solve problems by dynamic programming over tree decompositions",
    long_about = "Reads an instance (ground facts such as `edge(a,b).`) from stdin, decomposes \
                  its hypergraph and solves the chosen problem: 3col, sat, minvc or cyclic."
)]
struct Args {
    /// Problem module: 3col, sat, minvc or cyclic.
    #[arg(long)]
    problem: String,

    /// enumeration, counting, decision, opt-enum, opt-counting or opt-value.
    #[arg(short = 'p', long = "problem-type", default_value = "enumeration")]
    problem_type: ProblemType,

    /// Edge predicate `name[/arity]`; replaces the problem's defaults. Repeatable.
    #[arg(short = 'e', long = "edge")]
    edge: Vec<String>,

    /// Vertex predicate `name[/arity]`; replaces the problem's defaults. Repeatable.
    #[arg(short = 'v', long = "vertex")]
    vertex: Vec<String>,

    /// Elimination-ordering heuristic: min-fill or min-degree.
    #[arg(long, default_value = "min-fill")]
    heuristic: Heuristic,

    /// Seed for tie-breaking in the heuristic.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Use this decomposition file instead of building one.
    #[arg(long)]
    decomposition: Option<PathBuf>,

    /// Write the decomposition that is solved over to this file.
    #[arg(long)]
    emit_decomposition: Option<PathBuf>,

    /// Stop enumeration after this many solutions.
    #[arg(long)]
    limit: Option<usize>,

    /// Print the decomposition width and exit.
    #[arg(long)]
    width_only: bool,
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub status: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            status: 0,
        }
    }

    fn fail(status: i32, message: impl std::fmt::Display) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            status,
        }
    }
}

/// Runs the program on `args` (including the program name) with `stdin`
/// as the instance text.
pub fn run<I, T>(args: I, stdin: &str) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(args) => args,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome::ok(text),
                _ => Outcome {
                    stdout: String::new(),
                    stderr: text,
                    status: EXIT_USAGE,
                },
            };
        }
    };
    match execute(&args, stdin) {
        Ok(stdout) => Outcome::ok(stdout),
        Err((status, message)) => Outcome::fail(status, message),
    }
}

type Failure = (i32, String);

fn usage(message: impl ToString) -> Failure {
    (EXIT_USAGE, message.to_string())
}

fn input(message: impl ToString) -> Failure {
    (EXIT_INPUT, message.to_string())
}

fn execute(args: &Args, stdin: &str) -> Result<String, Failure> {
    let module = lookup(&args.problem).map_err(usage)?;
    if !module.supports(args.problem_type) {
        return Err(usage(format!(
            "problem `{}` does not support problem type `{}`",
            module.name(),
            args.problem_type
        )));
    }

    let instance = parse_instance(stdin).map_err(|e| input(format!("instance {e}")))?;
    reject_reserved(&instance)?;

    let edge_preds = designations(&args.edge, &instance, module.edge_predicates())?;
    let vertex_preds = designations(&args.vertex, &instance, module.vertex_predicates())?;
    let h = build_hypergraph(&instance, &edge_preds, &vertex_preds).map_err(input)?;

    let d = match &args.decomposition {
        Some(path) => load_decomposition(path, &h)?,
        None => decompose(&h, args.heuristic, args.seed),
    };
    if let Some(path) = &args.emit_decomposition {
        fs::write(path, write_decomposition(&d, &h))
            .map_err(|e| input(format!("cannot write {}: {e}", path.display())))?;
    }
    if args.width_only {
        return Ok(format!("{}\n", d.width()));
    }

    let result = solve(&instance, &h, &d, module, args.problem_type).map_err(input)?;
    Ok(format_result(result, args.limit))
}

fn reject_reserved(instance: &Instance) -> Result<(), Failure> {
    for key in instance.predicates() {
        if RESERVED.contains(&(key.name.as_str(), key.arity)) {
            return Err(input(format!(
                "predicate {key} is reserved and may not appear in an instance"
            )));
        }
    }
    Ok(())
}

/// Resolves `-e`/`-v` values; without any, the module's defaults apply.
/// A bare name takes its arity from the instance.
fn designations(
    given: &[String],
    instance: &Instance,
    defaults: Vec<PredicateKey>,
) -> Result<Vec<PredicateKey>, Failure> {
    if given.is_empty() {
        return Ok(defaults);
    }
    given
        .iter()
        .map(|text| {
            if text.contains('/') {
                return text.parse().map_err(usage);
            }
            let arities: BTreeSet<usize> = instance
                .predicates()
                .filter(|k| k.name == *text)
                .map(|k| k.arity)
                .collect();
            match arities.len() {
                1 => Ok(PredicateKey::new(text.as_str(), *arities.first().unwrap())),
                0 => Err(usage(format!(
                    "predicate `{text}` does not occur in the instance; write it as `{text}/<arity>`"
                ))),
                _ => Err(usage(format!(
                    "predicate `{text}` occurs with several arities; write it as `{text}/<arity>`"
                ))),
            }
        })
        .collect()
}

/// Reads a decomposition file. Violations of the three decomposition
/// conditions are fatal; a valid decomposition not in normal form is
/// semi-normalized.
fn load_decomposition(path: &PathBuf, h: &Hypergraph) -> Result<Decomposition, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    let d = read_decomposition(&text, h)
        .map_err(|e| input(format!("{}: {e}", path.display())))?;
    let report = validate(&d, h);
    if report.is_valid() {
        return Ok(d);
    }
    if report
        .violations
        .iter()
        .any(|v| Condition::is_decomposition_condition(v.condition))
    {
        return Err(input(format!("{}: invalid decomposition: {report}", path.display())));
    }
    semi_normalize(&d, h).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Renders a result as line-oriented text.
///
/// Decisions print `yes`/`no`, counts a decimal integer, optima an integer
/// or `INFEASIBLE`, optimum counts `optimum <k>` and `count <n>` lines, and
/// enumerations one solution per line as space-separated `vertex=value`
/// entries sorted by vertex.
pub fn format_result(result: SolveResult<'_>, limit: Option<usize>) -> String {
    let mut out = String::new();
    let take = limit.unwrap_or(usize::MAX);
    match result {
        SolveResult::Decision(yes) => out.push_str(if yes { "yes\n" } else { "no\n" }),
        SolveResult::Counting(n) => writeln!(out, "{n}").unwrap(),
        SolveResult::Enumeration(solutions) => {
            for s in solutions.take(take) {
                writeln!(out, "{s}").unwrap();
            }
        }
        SolveResult::OptValue(Some(k)) => writeln!(out, "{k}").unwrap(),
        SolveResult::OptCounting {
            optimum: Some(k),
            count,
        } => write!(out, "optimum {k}\ncount {count}\n").unwrap(),
        SolveResult::OptEnum {
            optimum: Some(_),
            solutions,
        } => {
            for s in solutions.take(take) {
                writeln!(out, "{s}").unwrap();
            }
        }
        SolveResult::OptValue(None)
        | SolveResult::OptCounting { optimum: None, .. }
        | SolveResult::OptEnum { optimum: None, .. } => out.push_str("INFEASIBLE\n"),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = "vertex(a). vertex(b). vertex(c). vertex(d). vertex(e).
        edge(a,b). edge(a,c). edge(b,c). edge(b,d). edge(c,d). edge(d,e).";

    fn cli(args: &[&str], stdin: &str) -> Outcome {
        run(std::iter::once("treedp").chain(args.iter().copied()), stdin)
    }

    #[test]
    fn counts_colorings() {
        let out = cli(&["--problem", "3col", "-p", "counting"], EXAMPLE);
        assert_eq!(out, Outcome::ok("12\n".into()));
    }

    #[test]
    fn cover_optimum() {
        assert_eq!(cli(&["--problem", "minvc", "-p", "opt-value"], EXAMPLE).stdout, "3\n");
    }

    #[test]
    fn cyclic_counting_is_usage_error() {
        let out = cli(&["--problem", "cyclic", "-p", "counting"], "order(a,b,c).");
        assert_eq!(out.status, EXIT_USAGE);
        assert!(out.stdout.is_empty());
    }

    #[test]
    fn unknown_problem_and_flag() {
        assert_eq!(cli(&["--problem", "foo"], EXAMPLE).status, EXIT_USAGE);
        assert_eq!(cli(&["--problem", "3col", "--bogus"], EXAMPLE).status, EXIT_USAGE);
        assert_eq!(cli(&[], EXAMPLE).status, EXIT_USAGE);
    }

    #[test]
    fn reserved_predicates_rejected() {
        let out = cli(&["--problem", "3col"], "edge(a,b). map(a,red).");
        assert_eq!(out.status, EXIT_INPUT);
        assert!(out.stderr.contains("map/2"));
        // Same name, different arity, is fine.
        assert_eq!(cli(&["--problem", "3col", "-p", "counting"], "edge(a,b). map(a).").stdout, "6\n");
    }

    #[test]
    fn parse_error_is_input_error() {
        let out = cli(&["--problem", "3col"], "edge(a,");
        assert_eq!(out.status, EXIT_INPUT);
        assert!(out.stderr.contains("1:"));
    }

    #[test]
    fn edge_override_infers_arity() {
        let out = cli(&["--problem", "3col", "-p", "counting", "-e", "link"], "link(a,b). link(b,c).");
        assert_eq!(out.stdout, "12\n");
        let out = cli(&["--problem", "3col", "-e", "nowhere"], "edge(a,b).");
        assert_eq!(out.status, EXIT_USAGE);
    }

    #[test]
    fn enumeration_limit_and_format() {
        let out = cli(&["--problem", "3col", "--limit", "2"], EXAMPLE);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("a="));
        assert_eq!(lines[0].split(' ').count(), 5);
    }

    #[test]
    fn width_only() {
        assert_eq!(cli(&["--problem", "3col", "--width-only"], EXAMPLE).stdout, "2\n");
    }

    #[test]
    fn formats() {
        assert_eq!(format_result(SolveResult::Decision(true), None), "yes\n");
        assert_eq!(format_result(SolveResult::Decision(false), None), "no\n");
        assert_eq!(format_result(SolveResult::OptValue(None), None), "INFEASIBLE\n");
        let r = SolveResult::OptCounting {
            optimum: Some(3),
            count: 4u32.into(),
        };
        assert_eq!(format_result(r, None), "optimum 3\ncount 4\n");
    }

    #[test]
    fn help_goes_to_stdout() {
        let out = cli(&["--help"], "");
        assert_eq!(out.status, 0);
        assert!(out.stdout.contains("--problem"));
    }
}
