use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use loghh_core::cli::{override_budget, parse_problem, run_problem, Report};

#[derive(Parser)]
#[command(name = "loghh", version, about = "Exact log Hochschild and cyclic homology of charted log rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every task of a problem file and print a JSON report.
    Run {
        file: PathBuf,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append a dense oracle cross-check to the task list.
        #[arg(long)]
        oracle: bool,
        /// Worker threads for degreewise parallel work.
        #[arg(long)]
        threads: Option<usize>,
        /// Budget override such as `max_pairs=50000`; may be repeated.
        #[arg(long = "budget", value_name = "KEY=VALUE")]
        budget: Vec<String>,
    },
    /// Parse and validate a problem file without running it.
    Check { file: PathBuf },
}

fn emit(report: &Report, out: Option<&PathBuf>) -> ExitCode {
    let text = report.to_json();
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                eprintln!("loghh: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => println!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            file,
            out,
            oracle,
            threads,
            budget,
        } => {
            if let Some(t) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                    eprintln!("loghh: {e}");
                }
            }
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("loghh: cannot read {}: {e}", file.display());
                    return ExitCode::from(1);
                }
            };
            let text = if oracle { with_oracle(&text) } else { text };
            let budget = if budget.is_empty() {
                None
            } else {
                let base = parse_problem(&text).map(|p| p.budget()).unwrap_or_default();
                match override_budget(base, &budget) {
                    Ok(b) => Some(b),
                    Err(e) => return emit(&Report::input_error(&text, &e), out.as_ref()),
                }
            };
            emit(&run_problem(&text, budget.as_ref()), out.as_ref())
        }
        Command::Check { file } => {
            let text = match std::fs::read_to_string(&file) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("loghh: cannot read {}: {e}", file.display());
                    return ExitCode::from(1);
                }
            };
            match parse_problem(&text).and_then(|p| p.to_spec().and_then(|s| s.check(&p.budget()))) {
                Ok(()) => {
                    println!("ok");
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("loghh: {e}");
                    ExitCode::from(1)
                }
            }
        }
    }
}

/// Adds an oracle task covering the largest `n` among the existing tasks.
fn with_oracle(text: &str) -> String {
    let Ok(mut p) = parse_problem(text) else {
        return text.to_string();
    };
    use loghh_core::cli::Task;
    let n = p
        .tasks
        .iter()
        .map(|t| match t {
            Task::Hh { n, .. } | Task::Hkr { n, .. } | Task::Adams { n, .. } | Task::ThetaComplex { n } => *n,
            Task::Hc { m_max, .. } | Task::Sbi { m_max } | Task::Derham { m_max, .. } => *m_max,
            _ => 0,
        })
        .max()
        .unwrap_or(2);
    p.tasks.push(Task::Oracle { n, m_max: Some(n) });
    serde_json::to_string_pretty(&p).expect("problem serializes")
}
