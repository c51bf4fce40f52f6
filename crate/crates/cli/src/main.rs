use std::io::{self, Read, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdin = String::new();
    let args: Vec<String> = std::env::args().collect();
    let needs_input = !args.iter().any(|a| a == "--help" || a == "-h" || a == "--version" || a == "-V");
    if needs_input {
        if let Err(e) = io::stdin().read_to_string(&mut stdin) {
            eprintln!("error: cannot read stdin: {e}");
            return ExitCode::from(treedp_cli::EXIT_INPUT as u8);
        }
    }
    let outcome = treedp_cli::run(args, &stdin);
    // A closed pipe downstream is not worth reporting.
    let _ = io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.status as u8)
}
