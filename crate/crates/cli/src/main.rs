use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cfp_cli::{
    check_report, diagonalize_report, distribution_report, frame_potential_report, render, run_report, verify_report,
    AnalysisConfig, CliError, Outcome, OutputFormat,
};
use clap::{Args, Parser, Subcommand};

/// Frame-potential analysis of circuits built from commuting Pauli rotations.
#[derive(Debug, Parser)]
#[command(name = "cfp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Operator file: one Pauli string per line, '#' starts a comment.
    input: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long)]
    json: bool,
    /// Seed for Monte-Carlo sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct FrameArgs {
    /// Comma-separated list of positive t values.
    #[arg(long = "t", value_delimiter = ',', default_value = "1", value_parser = clap::value_parser!(u32).range(1..))]
    t: Vec<u32>,
    /// Evaluate the exact frame potential by grid quadrature.
    #[arg(long)]
    exact: bool,
    /// Monte-Carlo samples per t value (0 disables).
    #[arg(long, default_value_t = 0)]
    mc_samples: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that the operators pairwise commute.
    Check(Common),
    /// Emit the diagonalizing circuit W, the matrix A and the signs s.
    Diagonalize(Common),
    /// Emit the law of K and its moments.
    Distribution(Common),
    /// Emit the lattice volume and frame-potential values.
    FramePotential {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        frame: FrameArgs,
    },
    /// Cross-check every stage against the dense oracle.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Monte-Carlo samples for the t = 1 comparison (0 disables).
        #[arg(long, default_value_t = 20_000)]
        mc_samples: u64,
    },
    /// Full report: diagonalization, distribution and frame potential.
    Report {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        frame: FrameArgs,
        /// Also run the oracle cross-checks.
        #[arg(long)]
        verify: bool,
    },
}

fn config(common: &Common, frame: &FrameArgs, verify: bool) -> AnalysisConfig {
    AnalysisConfig {
        input: common.input.clone(),
        t_values: frame.t.clone(),
        verify,
        exact: frame.exact,
        mc_samples: frame.mc_samples,
        seed: common.seed,
        format: format(common),
    }
}

fn format(common: &Common) -> OutputFormat {
    if common.json {
        OutputFormat::Json
    } else {
        OutputFormat::Text
    }
}

fn input(common: &Common) -> &Path {
    &common.input
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, fmt): (Result<Outcome, CliError>, OutputFormat) = match &cli.command {
        Command::Check(c) => (check_report(input(c)), format(c)),
        Command::Diagonalize(c) => (diagonalize_report(input(c)), format(c)),
        Command::Distribution(c) => (distribution_report(input(c)), format(c)),
        Command::FramePotential { common, frame } => {
            (frame_potential_report(&config(common, frame, false)), format(common))
        }
        Command::Verify { common, mc_samples } => {
            (verify_report(input(common), *mc_samples, common.seed), format(common))
        }
        Command::Report { common, frame, verify } => (run_report(&config(common, frame, *verify)), format(common)),
    };
    match result {
        Ok(outcome) => {
            print!("{}", render(&outcome.report, fmt));
            ExitCode::from(outcome.exit_code)
        }
        Err(e) => {
            match fmt {
                OutputFormat::Json => print!("{}", render(&e.to_json(), fmt)),
                OutputFormat::Text if matches!(e, CliError::NonCommuting { .. }) => {
                    println!("commuting: false");
                    eprintln!("error: {e}");
                }
                OutputFormat::Text => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
