use bebp::cli::{dispatch, parse_config, Command, Overrides};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Boundary-pattern poisoning attacks against binary IDS classifiers.
#[derive(Parser)]
#[command(name = "bebp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (TOML).
    #[arg(short, long)]
    config: PathBuf,
    /// Override the poisoning ratio.
    #[arg(long)]
    eta: Option<f64>,
    /// Override the number of poisoning rounds.
    #[arg(long)]
    rounds: Option<usize>,
    /// Override the number of repetitions.
    #[arg(long)]
    repetitions: Option<usize>,
    /// Override the root seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Run a single victim model (nb, lr, svm-linear, svm-rbf, svm-poly,
    /// svm-sigmoid, lssvm-mi).
    #[arg(long)]
    victim: Option<String>,
    /// Override the output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Draw, preprocess and export the dataset splits.
    Prepare(CommonArgs),
    /// Run a single chronic poisoning attack and export its artifacts.
    Attack(CommonArgs),
    /// Run the full multi-victim, multi-repetition experiment.
    Experiment(CommonArgs),
    /// Run the experiment across a list of poisoning ratios.
    Sweep(CommonArgs),
    /// Compare BEBP against the BASIC and RANDOM injectors.
    CompareBaselines(CommonArgs),
    /// Export per-round decision-boundary rasters (2-D data only).
    Raster(CommonArgs),
}

fn run() -> Result<Vec<PathBuf>, bebp::Error> {
    let cli = Cli::parse();
    let (cmd, args) = match &cli.command {
        Sub::Prepare(a) => (Command::Prepare, a),
        Sub::Attack(a) => (Command::Attack, a),
        Sub::Experiment(a) => (Command::Experiment, a),
        Sub::Sweep(a) => (Command::Sweep, a),
        Sub::CompareBaselines(a) => (Command::CompareBaselines, a),
        Sub::Raster(a) => (Command::Raster, a),
    };
    let cfg = parse_config(&args.config)?;
    let overrides = Overrides {
        eta: args.eta,
        rounds: args.rounds,
        repetitions: args.repetitions,
        seed: args.seed,
        victim: args.victim.clone(),
        out: args.out.clone(),
    };
    dispatch(cmd, cfg, &overrides)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(artifacts) => {
            for a in artifacts {
                println!("{}", a.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
