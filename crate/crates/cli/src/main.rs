mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Failure, Outcome};
use config::RunConfig;

#[derive(Parser)]
#[command(name = "unravel", version, about = "Monte-Carlo unravelling of the two-band rate equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the trajectory ensemble and write mean excited population.
    Simulate(RunArgs),
    /// Integrate the deterministic rate equation.
    Solve(RunArgs),
    /// Record one trajectory with its jumps and survival probability.
    Trajectory(RunArgs),
    /// Run both and check the ensemble against the reference within 3 standard errors.
    Compare(RunArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Overrides `ensemble.master_seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Overrides `output_dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn load(args: &RunArgs) -> Result<RunConfig, Failure> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.config.display())))?;
    let mut cfg = RunConfig::parse(&text).map_err(|e| {
        let at = match e.line {
            Some(l) => format!("{}:{l}", args.config.display()),
            None => args.config.display().to_string(),
        };
        Failure::Config(format!("{at}: {}", e.message))
    })?;
    if let Some(seed) = args.seed {
        cfg.ensemble.master_seed = seed;
    }
    if let Some(out) = &args.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    let (args, cmd): (&RunArgs, fn(&RunConfig) -> Result<Outcome, Failure>) = match &cli.command {
        Command::Simulate(a) => (a, commands::simulate),
        Command::Solve(a) => (a, commands::solve),
        Command::Trajectory(a) => (a, commands::trajectory),
        Command::Compare(a) => (a, commands::compare),
    };
    let cfg = load(args)?;
    match args.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::Config(format!("cannot start {n} worker threads: {e}")))?;
            pool.install(|| cmd(&cfg))
        }
        None => cmd(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Deviates) => {
            eprintln!("compare: ensemble mean leaves the 3-stderr band (see summary.json)");
            ExitCode::from(1)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
