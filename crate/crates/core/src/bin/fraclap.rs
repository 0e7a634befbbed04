use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use fraclap::cli::{self, ExperimentConfig};

#[derive(Parser)]
#[command(name = "fraclap", version, about = "Singular fractional problems on an interval")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the approximating ladder and the limit problem, then certify.
    Solve { config: PathBuf },
    /// Certify a stored solution.csv without solving.
    Verify { config: PathBuf, solution: PathBuf },
    /// Run every config matching a glob pattern.
    Sweep { pattern: String },
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let result = match &args.command {
        Command::Solve { config } => ExperimentConfig::from_file(config)
            .and_then(|c| cli::run_solve(&c))
            .map(|r| {
                eprintln!("solve: {}", r.status);
                r.exit_code()
            }),
        Command::Verify { config, solution } => ExperimentConfig::from_file(config)
            .and_then(|c| cli::run_verify(&c, solution))
            .map(|r| {
                eprintln!("verify: {}", r.status);
                r.exit_code()
            }),
        Command::Sweep { pattern } => cli::load_sweep(pattern)
            .and_then(|cs| cli::run_sweep(&cs))
            .map(|r| {
                eprintln!("sweep: {} rows", r.rows.len());
                r.exit_code
            }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(cli::exit_code_for(&e) as u8)
        }
    }
}
