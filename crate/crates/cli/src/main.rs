//! `abrasion`: command-line front end for abrasion-core.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numerical failure.

mod commands;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "abrasion",
    version,
    about = "Predict Akron abrasion of SSBR composites"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate or export a dataset.
    #[command(subcommand)]
    Data(DataCommand),
    /// Train one model on a seeded split (or all rows with --full) and save it.
    Train(TrainArgs),
    /// Apply a saved model to a CSV of feature rows.
    Predict(PredictArgs),
    /// Seed-averaged comparison of several models.
    Sweep(SweepArgs),
}

#[derive(Debug, Subcommand)]
enum DataCommand {
    /// Check records and print the findings.
    Validate {
        /// CSV file to check (same as --data).
        path: Option<PathBuf>,
        #[command(flatten)]
        source: SourceArgs,
    },
    /// Write a dataset as canonical CSV.
    Export {
        #[command(flatten)]
        source: SourceArgs,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args, Clone, Default)]
struct SourceArgs {
    /// Use the embedded 23-sample dataset (the default).
    #[arg(long, conflicts_with = "data")]
    builtin: bool,
    /// Read samples from a CSV file.
    #[arg(long, value_name = "CSV")]
    data: Option<PathBuf>,
}

#[derive(Debug, Args, Clone)]
struct HyperArgs {
    /// MLFN learning rate.
    #[arg(long, default_value_t = 0.05)]
    lr: f64,
    /// MLFN momentum.
    #[arg(long, default_value_t = 0.9)]
    momentum: f64,
    #[arg(long, default_value_t = 20_000)]
    max_epochs: usize,
    /// Epochs without improvement before stopping.
    #[arg(long, default_value_t = 500)]
    patience: usize,
    /// GRNN bandwidth grid as lo:hi:n (log-spaced).
    #[arg(long, value_name = "LO:HI:N", default_value = "0.01:3:50")]
    sigma_grid: String,
    /// Feature columns to leave out, comma separated.
    #[arg(long, value_name = "COLUMNS")]
    exclude: Option<String>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// mlfn:<nodes> | grnn | ols
    spec: String,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Rows held out for testing.
    #[arg(long, default_value_t = 5)]
    test_size: usize,
    /// Train on every row, no held-out set.
    #[arg(long)]
    full: bool,
    #[arg(short, long, default_value = "model.json")]
    out: PathBuf,
    #[command(flatten)]
    hyper: HyperArgs,
}

#[derive(Debug, Args)]
struct PredictArgs {
    model: PathBuf,
    /// CSV with the eight feature columns, optionally preceded by akron_abrasion.
    input: PathBuf,
    /// Output CSV; stdout when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Comma-separated model specs; mlfn:a-b expands to a range.
    #[arg(long, default_value = "grnn,mlfn:2-16")]
    models: String,
    /// Seeds as a list and/or ranges, e.g. 1-10 or 1,4,7-9.
    #[arg(long, default_value = "1-10")]
    seeds: String,
    #[arg(long, default_value_t = 5)]
    test_size: usize,
    /// Directory for sweep.csv and diagnostics/; nothing is written when omitted.
    #[arg(short, long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    hyper: HyperArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Data(DataCommand::Validate { path, source }) => {
            commands::data_validate(path, &source)
        }
        Command::Data(DataCommand::Export { source, out }) => commands::data_export(&source, out),
        Command::Train(args) => commands::train(&args),
        Command::Predict(args) => commands::predict(&args),
        Command::Sweep(args) => commands::sweep(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", commands::describe(&e));
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
