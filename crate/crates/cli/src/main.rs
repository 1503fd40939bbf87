//! `nonloc`: certify, verify, bound, search and reproduce.
//!
//! Exit codes: 0 success (certified, feasible, complete), 1 negative result
//! (not certified, infeasible, inconclusive, failing suite), 2 input error,
//! 3 search stopped by its budget.

#![forbid(unsafe_code)]

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nonloc_core::Bipartition;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "NONLOC_THREADS";

#[derive(Debug, Parser)]
#[command(name = "nonloc", version, about = "Certify genuine nonlocality of GHZ-lattice state sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute exact β for all three cuts and classify the set.
    Certify(CertifyArgs),
    /// Check a dual certificate against a state set.
    Verify(VerifyArgs),
    /// Apply the cardinality/weight bound to a GHZ-like set.
    Bound(BoundArgs),
    /// Look for small certified subsets.
    Search(SearchArgs),
    /// Run every reproduction check and print a pass/fail table.
    #[command(name = "paper-suite")]
    Suite(SuiteArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    FloatPrefilter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CutArg {
    #[value(name = "A|BC", alias = "A", alias = "a")]
    A,
    #[value(name = "B|CA", alias = "B", alias = "b")]
    B,
    #[value(name = "C|AB", alias = "C", alias = "c")]
    C,
}

impl From<CutArg> for Bipartition {
    fn from(c: CutArg) -> Self {
        match c {
            CutArg::A => Bipartition::A,
            CutArg::B => Bipartition::B,
            CutArg::C => Bipartition::C,
        }
    }
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    /// State-set JSON file.
    #[arg(long)]
    pub input: PathBuf,
    /// Write the JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Restrict the solutions written with --solutions to one cut.
    #[arg(long)]
    pub cut: Option<CutArg>,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Include optimal dual certificates and primal measurements.
    #[arg(long)]
    pub solutions: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// State-set JSON file, optionally followed by the certificate file.
    #[arg(long, num_args = 1..=2, required = true)]
    pub input: Vec<PathBuf>,
    /// Certificate JSON file.
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Require the certificate to be for this cut.
    #[arg(long)]
    pub cut: Option<CutArg>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// GHZ-like set (`{"d", "states"}`) or lattice state-set JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Use only these positions of the set (comma-separated, 0-based).
    #[arg(long, value_delimiter = ',')]
    pub select: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Candidate state-set JSON file.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Exhaustive: examine only this size. Greedy: stop at this size.
    #[arg(long)]
    pub target_size: Option<usize>,
    /// Enumerate subsets by size (the default).
    #[arg(long, conflicts_with = "greedy")]
    pub exhaustive: bool,
    /// Drop states one at a time instead of enumerating.
    #[arg(long)]
    pub greedy: bool,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: ModeArg,
    /// Maximum number of β evaluations (one cut of one subset each).
    #[arg(long, default_value_t = nonloc_core::search::DEFAULT_BUDGET)]
    pub budget: u64,
    /// Resume from, and save progress to, this cursor file.
    #[arg(long)]
    pub cursor: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuiteArgs {
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run only these criteria (comma-separated, 1-10).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<usize>>,
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(commands::EXIT_INPUT);
    }
    let outcome = match cli.command {
        Command::Certify(a) => commands::certify(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Bound(a) => commands::bound(&a),
        Command::Search(a) => commands::search(&a),
        Command::Suite(a) => commands::suite(&a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::EXIT_INPUT)
        }
    }
}
