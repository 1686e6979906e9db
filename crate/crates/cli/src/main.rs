//! `aspt`: command-line front end for the proof laboratory.
//!
//! Exit codes follow the SAT-solver convention for `solve` (10 SAT, 20
//! UNSAT); every other command exits 0 on success, 1 on a usage error and
//! 2 on bad input, an invalid proof included.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Default per-instance timeout in seconds, read by `solve` and `bench`.
pub const TIMEOUT_ENV: &str = "ASPT_TIMEOUT_SECS";

#[derive(Parser, Debug)]
#[command(name = "aspt", version, about = "Tableau and resolution proofs for normal logic programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide a program; prints the answer, a model and the search counters.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        engine: EngineArgs,
        /// Write the tableau proof here when the answer is UNSAT.
        #[arg(long)]
        emit_proof: Option<PathBuf>,
        /// Wall-clock budget in seconds; defaults to $ASPT_TIMEOUT_SECS, else unlimited.
        #[arg(long)]
        timeout: Option<f64>,
    },
    /// Check a tableau proof against a program, or a resolution proof against a CNF.
    CheckProof {
        #[arg(long, group = "kind", required = true)]
        tableau: bool,
        #[arg(long, group = "kind")]
        res: bool,
        #[arg(long, group = "kind")]
        eres: bool,
        input: PathBuf,
        proof: PathBuf,
    },
    /// Clausal completion of a program, or the guess-and-check program of a CNF.
    Translate {
        #[arg(long, group = "dir", required = true)]
        to_cnf: bool,
        #[arg(long, group = "dir")]
        to_asp: bool,
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        namemap: Option<PathBuf>,
    },
    /// Generate a family member (`php`, `cphp`, `ephp`, `php-loops` with N),
    /// or add random redundant rules to a program (`addred` with an input file).
    Gen {
        kind: String,
        /// N for the families, the input program for `addred`.
        arg: String,
        output: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Remove rules whose heads occur in no body, to a fixpoint.
    Simplify {
        #[arg(long, required = true)]
        red_star: bool,
        input: PathBuf,
        output: PathBuf,
    },
    /// Translate proofs between the tableau and resolution systems.
    Simulate {
        #[arg(value_enum)]
        direction: Direction,
        /// Program for the tableau directions, CNF for the resolution ones.
        input: PathBuf,
        proof: PathBuf,
        output: PathBuf,
        /// Also write the translated problem (CNF or program) the output proof refers to.
        #[arg(long)]
        problem_out: Option<PathBuf>,
    },
    /// Run a family over a size range and write CSV rows.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: usize,
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long)]
        plotdata: Option<PathBuf>,
        /// Median/min/max per percentage, for addred-php.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, default_value_t = 15)]
        repeats: usize,
        /// Per-instance budget in seconds; defaults to $ASPT_TIMEOUT_SECS, else 60.
        #[arg(long)]
        timeout: Option<f64>,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value_t = RulesArg::Full)]
    pub rules: RulesArg,
    /// Defaults to `atoms` under smodels and `atoms+bodies` otherwise.
    #[arg(long)]
    pub cut_scope: Option<String>,
    #[arg(long, value_enum, default_value_t = HeuristicArg::Lex)]
    pub heuristic: HeuristicArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub lookahead: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum RulesArg {
    Full,
    Supported,
    Nomore,
    Smodels,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum HeuristicArg {
    Lex,
    Moms,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Aspt2tres,
    Tres2aspt,
    Easpt2eres,
    Eres2easpt,
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Input(anyhow::Error),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
