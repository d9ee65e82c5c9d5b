//! Command-line front end for the equisquare library.

mod commands;
mod tables;
mod verify;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "equisquare",
    version,
    about = "Shuffled equi-n-squares: tables, campaigns, solving and streams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    /// log2 of the state count and the latin-square lower bound
    States,
    /// expected colors E, bias B and digit bias B_N
    Bias,
    /// Minrows r(n)
    Minrows,
    /// the n(b, f) triangle
    Nbf,
    /// spaghetti boundary s(n)
    Spaghetti,
    /// average shuffles sh(n)
    Sh,
    /// shuffle lower bound d_n
    Dn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    KeyResult,
    HmoveOnly,
    ThreeCycle,
    Flows,
    Forcing,
    Compile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    H,
    V,
}

#[derive(clap::Args, Debug, Clone)]
pub struct CampaignArgs {
    #[arg(short = 'n')]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Every n-set instead of samples (key-result, hmove-only).
    #[arg(long)]
    pub exhaustive: bool,
    /// Search budget for each rotate-apart search.
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Inputs per run for the forcing campaign.
    #[arg(long, default_value_t = 8)]
    pub length: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a table; RANGE is `a..b` (inclusive) or a single n.
    Tables {
        which: TableKind,
        range: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run a verification campaign.
    Verify {
        kind: VerifyKind,
        #[command(flatten)]
        args: CampaignArgs,
    },
    /// Compile a move sequence turning one square into another.
    Solve {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        /// Output file (JSON); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Use the generator-based compiler.
        #[arg(long)]
        naive: bool,
    },
    /// Standard operation mode: two HV-shuffles then H-indirection per input.
    Stream {
        #[arg(long)]
        state: PathBuf,
        /// Input numbers, one per line (decimal or `x_{n-1} ... x_0`).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Move schedule (JSON) replacing the seeded shuffles.
        #[arg(long)]
        schedule: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print outputs as base-n digit lists.
        #[arg(long)]
        digits: bool,
    },
    /// Compute a schedule making the standard mode emit given targets.
    Force {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subsets of Z/nZ.
    Ngon {
        #[command(subcommand)]
        op: NgonOp,
    },
    /// Wavy-latin checks and the type census.
    Wavy {
        #[command(subcommand)]
        op: WavyOp,
    },
    /// Latin graph partitions and common latin partitions.
    Flows {
        #[command(subcommand)]
        op: FlowsOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum NgonOp {
    /// Print the cyclotomic polynomial C_n.
    Cyclotomic {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Rotate sets apart; each SET is a comma-separated list.
    Apart {
        #[arg(short = 'n')]
        n: usize,
        #[arg(required = true, num_args = 2..)]
        sets: Vec<String>,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Whether S(x) vanishes at the d-th powers of a primitive n-th root.
    Balanced {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd')]
        d: usize,
        set: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum WavyOp {
    /// Count types of equi-n-squares and the non-wavy ones (n <= 4).
    Census {
        #[arg(short = 'n')]
        n: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Search a wavy-latin network for one square.
    Check {
        #[arg(long)]
        state: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum FlowsOp {
    /// Partition a square into n latin H-graphs (or V-graphs).
    Graphs {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = AxisArg::H)]
        axis: AxisArg,
    },
    /// Partition the square into n-sets latin in both squares.
    Common {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
}

/// Outcome of a command: `Ok(true)` success, `Ok(false)` a failed check.
type Outcome = anyhow::Result<bool>;

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Tables {
            which,
            range,
            format,
        } => tables::run(which, range.as_deref(), format),
        Command::Verify { kind, args } => verify::run(kind, &args),
        Command::Solve {
            from,
            to,
            out,
            naive,
        } => commands::solve(&from, &to, out.as_deref(), naive),
        Command::Stream {
            state,
            input,
            seed,
            schedule,
            out,
            digits,
        } => commands::stream(
            &state,
            &input,
            seed,
            schedule.as_deref(),
            out.as_deref(),
            digits,
        ),
        Command::Force {
            state,
            input,
            targets,
            out,
        } => commands::force(&state, &input, &targets, out.as_deref()),
        Command::Ngon { op } => commands::ngon(op),
        Command::Wavy { op } => commands::wavy(op),
        Command::Flows { op } => commands::flows(op),
    }
}

/// Input problems map to exit code 2, everything else to 1.
fn is_usage_error(e: &anyhow::Error) -> bool {
    use equisquare::Error as E;
    e.chain().any(|c| {
        c.downcast_ref::<std::io::Error>().is_some()
            || matches!(
                c.downcast_ref::<E>(),
                Some(
                    E::InvalidSize(_)
                        | E::SizeMismatch { .. }
                        | E::OutOfRange { .. }
                        | E::Duplicate { .. }
                        | E::Parse { .. }
                        | E::Multiplicity { .. }
                        | E::Precondition(_)
                        | E::Unsupported(_)
                )
            )
            || c.downcast_ref::<commands::UsageError>().is_some()
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
