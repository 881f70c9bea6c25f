//! `emsum`: summarize, merge and verify mergeable summaries from the command
//! line, and search for witnesses of non-mergeability.
//!
//! Exit codes: 0 on success, 1 on any operational error, 2 when a
//! verification fails or a witness turns up where none should exist.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use emsum_core::engine::{Encoding, ReductionMode};
use emsum_core::ingestion::Format;
use emsum_core::verification::Statistic;

#[derive(Parser)]
#[command(name = "emsum", version, about = "Exactly mergeable summaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a data file into a summary file.
    Summarize(SummarizeArgs),
    /// Merge summary files covering disjoint partitions.
    Merge(MergeArgs),
    /// Check the merge law on random splits of a data file.
    Verify(VerifyArgs),
    /// Search for, or replay, a witness that a statistic is not mergeable.
    Witness(WitnessArgs),
}

#[derive(Args)]
pub struct SummarizeArgs {
    /// CSV or JSONL input.
    #[arg(long)]
    pub data: PathBuf,
    /// Schema JSON.
    #[arg(long)]
    pub schema: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long)]
    pub format: Option<Format>,
    /// Number of partitions for the round-robin and contiguous strategies.
    #[arg(long)]
    pub partitions: Option<usize>,
    /// round-robin, contiguous or by-column:NAME.
    #[arg(long, default_value = "contiguous")]
    pub strategy: String,
    /// sequential, tree or tree:WORKERS.
    #[arg(long, default_value = "sequential")]
    pub plan: ReductionMode,
    /// Worker threads for the tree plan.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Let the scheduler choose the tree shape.
    #[arg(long)]
    pub nondeterministic: bool,
    /// decimal or hex.
    #[arg(long, default_value = "decimal")]
    pub encoding: Encoding,
    /// Provenance label; defaults to the data file name.
    #[arg(long)]
    pub label: Option<String>,
    /// Summary file to write.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct MergeArgs {
    /// Summary files to merge, in order.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    #[arg(long)]
    pub format: Option<Format>,
    /// Random disjoint splits to check.
    #[arg(long, default_value_t = 100)]
    pub splits: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance for floating kinds.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Drop the right operand in every merge; the run must then fail.
    #[arg(long)]
    pub inject_fault: bool,
    /// JSON report to write.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Args)]
pub struct WitnessArgs {
    /// median, kth:K, count, sum, min, max or mean.
    #[arg(long, required_unless_present = "published_example")]
    pub stat: Option<Statistic>,
    /// Inclusive integer range a..b, or a comma-separated value list.
    #[arg(long, default_value = "1..9", conflicts_with = "published_example")]
    pub universe: String,
    #[arg(long, default_value_t = 3, conflicts_with = "published_example")]
    pub max_size: usize,
    /// Replay published example 1 (median) or 2 (2nd smallest).
    #[arg(long = "example", value_name = "N", conflicts_with = "stat")]
    pub published_example: Option<u8>,
}

/// Outcome of a command that ran to completion.
pub enum Status {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are operational, not verification failures
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Summarize(a) => commands::summarize(a),
        Command::Merge(a) => commands::merge(a),
        Command::Verify(a) => commands::verify(a),
        Command::Witness(a) => commands::witness(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
