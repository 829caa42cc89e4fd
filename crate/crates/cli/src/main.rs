use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use hperc::threshold::SamplingMode;
use hperc::Strategy;

mod commands;
mod config;
mod error;
mod output;
mod spec;

/// H-percolation closures, template analysis and threshold experiments.
#[derive(Debug, Parser)]
#[command(name = "hperc", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Balance report for a template: λ, λ*, witnesses, ℓ bounds.
    Analyze(AnalyzeArgs),
    /// H-closure of a graph.
    Close(CloseArgs),
    /// Estimate p_c(n, H) for one or more n.
    Pc(PcArgs),
    /// Estimate the exponent ℓ(H) from p_c over several n.
    Ell(PcArgs),
    /// Strictly-balanced fraction of random templates across alpha.
    Sweep(SweepArgs),
    /// Balance statistics of random templates at one (k, alpha).
    Stats(StatsArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["file", "clique", "cycle", "path", "gnp", "template"])))]
pub struct AnalyzeArgs {
    /// Edge-list file.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, value_name = "K")]
    pub clique: Option<usize>,
    #[arg(long, value_name = "K")]
    pub cycle: Option<usize>,
    #[arg(long, value_name = "K")]
    pub path: Option<usize>,
    /// Random template `k,alpha,seed=S`.
    #[arg(long, value_name = "K,ALPHA,seed=S")]
    pub gnp: Option<String>,
    /// Any template spec (clique4, cycle:5, gnp:10,0.5,seed=1, or a file).
    #[arg(long)]
    pub template: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Allow templates above the analysis guard.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct CloseArgs {
    /// Initial graph (edge-list file).
    #[arg(long)]
    pub init: PathBuf,
    #[arg(long)]
    pub template: String,
    #[arg(long, default_value = "worklist")]
    pub strategy: Strategy,
    /// Also write the edges added in each round as edge-list files.
    #[arg(long)]
    pub rounds_dir: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Allow graphs above the closure guard.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct PcArgs {
    #[arg(long)]
    pub template: Option<String>,
    /// Comma-separated graph sizes.
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub mode: Option<SamplingMode>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub k: Option<usize>,
    /// Comma-separated edge probabilities in (0, 1].
    #[arg(long, value_delimiter = ',')]
    pub alphas: Vec<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Close(a) => commands::close(a),
        Command::Pc(a) => commands::pc(a, cli.threads),
        Command::Ell(a) => commands::ell(a, cli.threads),
        Command::Sweep(a) => commands::sweep(a, cli.threads),
        Command::Stats(a) => commands::stats(a, cli.threads),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
