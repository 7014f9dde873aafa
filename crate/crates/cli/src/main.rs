use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use occu_cli::commands::{
    build_mob, eval, export, feasibility, gen_motion, BuildMobArgs, EvalArgs, ExportArgs,
    FeasibilityArgs, GenMotionArgs, RunArgs,
};
use occu_cli::config::ToolConfig;
use occu_cli::Outcome;

/// Occupancy toolkit: sweep motions into voxel grids, simulate
/// goal-reaching in them, and score the results.
#[derive(Debug, Parser)]
#[command(name = "occu", version, disable_help_subcommand = true)]
struct Cli {
    /// Tool config file (key = value lines, unknown keys rejected).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads for batch commands; 0 uses all cores.
    #[arg(long, global = true, env = "OCCU_THREADS")]
    threads: Option<usize>,
    /// Seed override for seeded commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Chatty progress on stderr.
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep motion files into occupancy grids plus a manifest.
    BuildMob(BuildMobArgs),
    /// Simulate one goal-reaching episode into a frame log.
    Run(RunArgs),
    /// Score episode logs and ground-truth motions into a metric report.
    Eval(EvalArgs),
    /// Convert grids and trajectories for external viewers.
    Export(ExportArgs),
    /// Probe grids for upright-agent reachability.
    Feasibility(FeasibilityArgs),
    /// Generate a synthetic motion clip.
    GenMotion(GenMotionArgs),
}

fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    let mut tool = match &cli.config {
        Some(path) => ToolConfig::load(path)?,
        None => ToolConfig::default(),
    };
    if let Some(threads) = cli.threads {
        tool.threads = threads;
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(tool.threads)
        .build_global()
        .ok(); // tests call dispatch repeatedly; the pool is per-process
    let verbose = cli.verbose;
    match &cli.command {
        Command::BuildMob(args) => build_mob(args, &tool, verbose),
        Command::Run(args) => occu_cli::commands::run(args, &tool, cli.seed, verbose),
        Command::Eval(args) => eval(args, &tool, verbose),
        Command::Export(args) => export(args, verbose),
        Command::Feasibility(args) => feasibility(args, verbose),
        Command::GenMotion(args) => gen_motion(args, cli.seed.unwrap_or(tool.seed), verbose),
    }
}

fn main() -> ExitCode {
    // exit codes: 0 success, 1 usage, 2 partial batch failure, 3 fatal
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let is_help =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = e.print();
            return if is_help { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
