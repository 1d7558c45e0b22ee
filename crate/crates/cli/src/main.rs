//! `negent`: entanglement negativity, disentangling factorization and
//! monogamy experiments from the command line.
//!
//! Exit codes: 0 success, 1 error (including usage errors), 2 a valid but
//! negative verdict (the state does not factorize).

mod commands;
mod manifest;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use negent_core::disentangle::DEFAULT_TOL;
use negent_core::SamplerConfig;

use source::{parse_cut, Cut, StateArgs};

#[derive(Parser, Debug)]
#[command(
    name = "negent",
    version,
    about = "Entanglement negativity and monogamy toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Negativity, log negativity and partial-transpose spectrum of a state.
    Negativity(NegativityArgs),
    /// Test N(A|BC) = N(A|B) and factorize the state when it holds.
    Disentangle(DisentangleArgs),
    /// Monogamy experiments.
    #[command(subcommand)]
    Monogamy(MonogamyCommand),
    /// Scatter plot of a monogamy CSV.
    Report(ReportArgs),
    /// Write a built-in state as JSON.
    State(StateCmdArgs),
    /// Re-run the command recorded in a manifest and check its outputs.
    Rerun(RerunArgs),
}

#[derive(Args, Debug)]
struct NegativityArgs {
    #[command(flatten)]
    source: StateArgs,
    /// Bipartition `A|B`, e.g. `0|12` or `0,1|2`; unlisted subsystems are
    /// traced out. Defaults to subsystem 0 against the rest.
    #[arg(long, value_parser = parse_cut)]
    cut: Option<Cut>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DisentangleArgs {
    #[command(flatten)]
    source: StateArgs,
    /// Absolute tolerance on N(A|BC) − N(A|B).
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Factorize along the chain A1 A2 … An.
    #[arg(long)]
    chain: bool,
    /// Directory for the factor files and manifest.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum MonogamyCommand {
    /// Haar-random states on [m, m, m].
    Scan(ScanArgs),
    /// Metropolis chain biased toward the saturation line.
    Sample(SampleArgs),
    /// Most negative un-squared slack over Haar-random states.
    Search(SearchArgs),
    /// N²(A|B1…Bn) against Σ N²(A|Bi) on Haar-random states.
    Generalized(GeneralizedArgs),
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 1000)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "NEGENT_WORKERS", default_value_t = 0)]
    workers: usize,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long, default_value_t = SamplerConfig::default().m)]
    m: usize,
    /// Total proposals, burn-in included.
    #[arg(long, default_value_t = SamplerConfig::default().steps)]
    steps: u64,
    #[arg(long, default_value_t = SamplerConfig::default().burn_in)]
    burn_in: u64,
    #[arg(long, default_value_t = SamplerConfig::default().stride)]
    stride: u64,
    /// Proposal step size.
    #[arg(long, default_value_t = SamplerConfig::default().sigma)]
    sigma: f64,
    #[arg(long, default_value_t = SamplerConfig::default().temperature)]
    temperature: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 1000)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "NEGENT_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Write the minimizing state as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GeneralizedArgs {
    #[arg(long, default_value_t = 4)]
    parties: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output; no dataset is written when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// Monogamy CSV.
    #[arg(long)]
    csv: PathBuf,
    #[arg(long)]
    svg: PathBuf,
}

#[derive(Args, Debug)]
struct StateCmdArgs {
    #[arg(long)]
    name: String,
    #[arg(long, value_parser = source::parse_dims)]
    dims: Option<negent_core::Dims>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RerunArgs {
    #[arg(long)]
    manifest: PathBuf,
}

/// Outcome of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Done,
    /// Valid input, negative verdict.
    Negative,
}

fn parse(argv: &[String]) -> Result<Cli, clap::Error> {
    Cli::try_parse_from(std::iter::once("negent".to_string()).chain(argv.iter().cloned()))
}

fn execute(cli: Cli, argv: &[String]) -> anyhow::Result<Status> {
    match cli.command {
        Command::Negativity(a) => commands::negativity(&a),
        Command::Disentangle(a) => commands::disentangle(&a, argv),
        Command::Monogamy(MonogamyCommand::Scan(a)) => commands::scan(&a, argv),
        Command::Monogamy(MonogamyCommand::Sample(a)) => commands::sample(&a, argv),
        Command::Monogamy(MonogamyCommand::Search(a)) => commands::search(&a, argv),
        Command::Monogamy(MonogamyCommand::Generalized(a)) => commands::generalized(&a, argv),
        Command::Report(a) => commands::report(&a, argv),
        Command::State(a) => commands::state(&a, argv),
        Command::Rerun(a) => commands::rerun(&a),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match parse(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli, &argv) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
