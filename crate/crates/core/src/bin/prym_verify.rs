//! Command-line front end: runs the verification suites and emits a
//! text or JSON report. Exit code 0 when every check passes, 1 when a
//! check fails, 2 on usage errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use prym_verify::suites::{run_suite, Suite, SuiteOptions};

#[derive(Parser)]
#[command(
    name = "prym-verify",
    version,
    about = "Exact verification of divisor-class, Fano-surface, theta-parity, \
             cubic-line and plane-quartic computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and report pass/fail per check.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run: classes | fano | theta | cubic | quartic | all
    suite: String,
    /// Write the report as JSON to this path instead of text on stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Seed for the deterministic coefficient samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of rational witnesses for the sampled checks.
    #[arg(long, default_value_t = 100)]
    samples: usize,
    /// Base prime for the finite-field suites (>= 5).
    #[arg(long)]
    prime: Option<u64>,
    /// Largest extension degree for the finite-field suites.
    #[arg(long)]
    ext: Option<u32>,
    /// Genus bound for the exhaustive theta suites (<= 4).
    #[arg(long, default_value_t = 4)]
    genus: u32,
    /// Polynomial input (JSON interchange format) for the quartic suite.
    #[arg(long)]
    curve: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Verify(args) = cli.command;
    let suite: Suite = match args.suite.parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let opts = SuiteOptions {
        seed: args.seed,
        samples: args.samples,
        prime: args.prime,
        ext: args.ext,
        genus: args.genus,
        curve: args.curve,
    };
    let report = match run_suite(suite, &opts) {
        Ok(r) => r,
        Err(prym_verify::Error::InvalidInput(msg)) => {
            eprintln!("usage error: {msg}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match &args.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, report.to_json()) {
                eprintln!("error writing report: {e}");
                return ExitCode::from(1);
            }
            eprintln!(
                "{} checks, {}",
                report.checks.len(),
                if report.all_pass() { "all passed" } else { "FAILURES" }
            );
        }
        None => {
            print!("{}", report.render_text());
        }
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
