//! Thin command-line front end: `run` a problem file, `validate` one, or
//! print the `formats` reference. All substance lives in the library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use evkernel::problem::{self, EngineChoice, Problem};

#[derive(Parser)]
#[command(
    name = "evkernel",
    version,
    about = "Refines interval-valued evidential knowledge with conditional rules"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the selected engine(s) on a problem file and print a JSON report
    Run(RunArgs),
    /// Parse and resolve a problem file, reporting what it contains
    Validate { file: PathBuf },
    /// Describe the problem-file and report formats and the exit codes
    Formats,
}

#[derive(Args)]
struct RunArgs {
    file: PathBuf,
    /// Engine to run: bayes, optimistic, general-check, partition, mass,
    /// oracle, or all (overrides the file)
    #[arg(long)]
    engine: Option<String>,
    /// Run the oracle in exact rational arithmetic
    #[arg(long)]
    exact: bool,
    /// Interleave the cheap coherence closure with optimistic refinement
    #[arg(long)]
    closure: bool,
    /// Append an aligned per-subset table after the JSON report
    #[arg(long)]
    table: bool,
    /// Comparison tolerance for the oracle-soundness verdicts
    #[arg(long, value_name = "EPS")]
    tol: Option<f64>,
    /// Sweep budget for the fixpoint refinements
    #[arg(long, value_name = "N")]
    max_sweeps: Option<usize>,
    /// Carrier-size cap for partition enumeration
    #[arg(long, value_name = "K")]
    partition_cap: Option<usize>,
    /// Include per-engine wall-clock times (non-deterministic output)
    #[arg(long)]
    timing: bool,
}

fn load(file: &PathBuf) -> Result<Problem, String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    problem::parse_problem(&text).map_err(|e| e.to_string())
}

fn run(args: &RunArgs) -> Result<u8, String> {
    let mut p = load(&args.file)?;
    if let Some(name) = &args.engine {
        p.engine = EngineChoice::parse(name).map_err(|e| e.to_string())?;
    }
    if let Some(tol) = args.tol {
        if !tol.is_finite() || tol < 0.0 {
            return Err(format!("--tol must be a nonnegative number, got {tol}"));
        }
        p.options.tolerance = tol;
    }
    if let Some(n) = args.max_sweeps {
        if n == 0 {
            return Err("--max-sweeps must be at least 1".into());
        }
        p.options.max_sweeps = Some(n);
    }
    if let Some(k) = args.partition_cap {
        if k == 0 {
            return Err("--partition-cap must be at least 1".into());
        }
        p.options.partition_cap = k;
    }
    p.options.exact |= args.exact;
    p.options.closure |= args.closure;
    p.options.timing |= args.timing;

    let report = problem::run_problem(&p);
    print!("{}", report.to_json_string());
    if args.table {
        if let Some(table) = report.table() {
            println!();
            print!("{table}");
        }
    }
    Ok(report.exit_code as u8)
}

fn validate(file: &PathBuf) -> Result<(), String> {
    let p = load(file)?;
    let prior_summary = match &p.prior {
        problem::Prior::Mass(m) => format!("mass prior with {} focal set(s)", m.focal_count()),
        problem::Prior::Bounds(b) => {
            let vals = b.values();
            let nontrivial = vals[1..vals.len() - 1].iter().filter(|v| **v > 0.0).count();
            format!("bounds prior with {nontrivial} nontrivial lower bound(s)")
        }
    };
    println!(
        "ok: frame of {} atoms ({}), {}, {} rule(s), engine {}",
        p.frame.atom_count(),
        p.frame.atom_names().join(", "),
        prior_summary,
        p.rule_list.len(),
        p.engine.name(),
    );
    Ok(())
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => match run(&args) {
            Ok(code) => ExitCode::from(code),
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
        Command::Validate { file } => match validate(&file) {
            Ok(()) => ExitCode::SUCCESS,
            Err(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
        },
        Command::Formats => {
            print!("{}", problem::FORMAT_HELP);
            ExitCode::SUCCESS
        }
    }
}
