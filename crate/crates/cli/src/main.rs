//! `iterroot` — square roots and n-th roots of self-maps from the command line.
//!
//! Exit codes: 0 success, 1 input or tool error, 2 an honest negative
//! (no root exists / none found / a certificate does not verify).

mod finite;
mod output;
mod perm;
mod pl;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "iterroot", version, about = "Iterative square roots and n-th roots of self-maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Self-maps of a finite set, given as a JSON graph file `{"n": .., "image": [..]}`.
    #[command(subcommand)]
    Finite(finite::FiniteCommand),
    /// Permutations in cycle notation, e.g. "(0 1 2)(3 4)".
    #[command(subcommand)]
    Perm(perm::PermCommand),
    /// Piecewise affine self-maps of the unit cube.
    #[command(subcommand)]
    Pl(pl::PlCommand),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Output options shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct OutputArgs {
    /// Directory for JSON/CSV artifacts; created if missing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Render the main result on stdout in this format instead of a text summary.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Result of a command that ran to completion.
pub enum Outcome {
    Success,
    /// A definite "no": no root, or a certificate that fails to verify.
    Negative,
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which would read as an honest negative here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Finite(c) => finite::run(c),
        Command::Perm(c) => perm::run(c),
        Command::Pl(c) => pl::run(c),
    };
    match result {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
