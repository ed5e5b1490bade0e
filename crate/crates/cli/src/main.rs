use std::process::ExitCode;

use clap::{Parser, Subcommand};
use geninv_cli::commands::{
    self, BundleArgs, CheckRolArgs, GenArgs, PinvArgs, SuiteArgs, WctArgs, WeightedArgs,
};
use geninv_cli::{Outcome, USAGE_EXIT};

/// Tensor generalized inverses and reverse-order-law checks.
///
/// Exit status: 0 on success, 1 when a verdict or consistency check fails,
/// 2 on usage, format or I/O errors.
#[derive(Parser)]
#[command(name = "geninv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded (A, B, M, N, L) bundle into a directory.
    Gen(GenArgs),
    /// Moore-Penrose inverse, or the weighted one with --weighted M N.
    Pinv(PinvArgs),
    /// Weighted Moore-Penrose inverse; same as `pinv --weighted M N`.
    Wpinv(WeightedArgs),
    /// Weighted conjugate transpose N^-1 A^H M.
    Wct(WctArgs),
    /// Check reverse-order-law characterizations on a bundle.
    CheckRol(CheckRolArgs),
    /// Check the weighted-transpose identities and lemmas on a bundle.
    Verify(BundleArgs),
    /// Run the seeded checker suite.
    Suite(SuiteArgs),
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Pinv(a) => commands::pinv(&a),
        Command::Wpinv(a) => commands::pinv(&PinvArgs::from(&a)),
        Command::Wct(a) => commands::wct(&a),
        Command::CheckRol(a) => commands::check_rol(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Suite(a) => commands::suite(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}
