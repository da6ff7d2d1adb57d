use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use akin::ensemble::with_threads;
use akin::experiments::{run_experiment, ExitStatus, ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(name = "akin", version, about = "Kinetic SDE experiments driven by squared Bessel processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate paths and write one trajectory CSV per path
    Simulate(RunArgs),
    /// Median log-log growth exponent of X
    ScalingExponent(RunArgs),
    /// KS of the rescaled X_T against the limit law
    LimitLaw(RunArgs),
    /// Check the four growth clauses on BESQ
    AssumptionAy(RunArgs),
    /// Tail slopes of excursion durations and integrals
    Excursions(RunArgs),
    /// First-passage survival against the closed form
    HittingTail(RunArgs),
    /// Second-moment and negligibility bounds on M
    MartingaleBounds(RunArgs),
    /// Pathwise comparison S >= Z
    Comparison(RunArgs),
    /// Parse and validate a config file without running it
    ValidateConfig { file: PathBuf },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `master_seed`
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: one per core)
    #[arg(long, env = "AKIN_THREADS")]
    threads: Option<usize>,
    /// Overrides `output_dir`
    #[arg(long)]
    out: Option<PathBuf>,
}

fn code(status: ExitStatus) -> ExitCode {
    ExitCode::from(status.code() as u8)
}

fn run(kind: ExperimentKind, args: RunArgs) -> ExitCode {
    let mut cfg = match ExperimentConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return code(ExitStatus::Usage);
        }
    };
    cfg.experiment = kind;
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    match with_threads(args.threads, || run_experiment(&cfg)) {
        Ok(outcome) => {
            for c in &outcome.report.checks {
                println!("{} {} = {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.value);
            }
            if let Some(b) = &outcome.report.blowup {
                eprintln!("error: {}", b.message);
            }
            println!("report: {}", outcome.output_dir.join("report.json").display());
            code(outcome.status)
        }
        Err(e) => {
            eprintln!("error: {e}");
            code(ExitStatus::for_error(&e))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match cli.command {
        Command::ValidateConfig { file } => {
            return match ExperimentConfig::load(&file) {
                Ok(cfg) => {
                    println!("ok: {} ({} paths)", cfg.experiment, cfg.n_paths);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    code(ExitStatus::Usage)
                }
            };
        }
        Command::Simulate(a) => (ExperimentKind::Simulate, a),
        Command::ScalingExponent(a) => (ExperimentKind::ScalingExponent, a),
        Command::LimitLaw(a) => (ExperimentKind::LimitLaw, a),
        Command::AssumptionAy(a) => (ExperimentKind::AssumptionAy, a),
        Command::Excursions(a) => (ExperimentKind::Excursions, a),
        Command::HittingTail(a) => (ExperimentKind::HittingTail, a),
        Command::MartingaleBounds(a) => (ExperimentKind::MartingaleBounds, a),
        Command::Comparison(a) => (ExperimentKind::Comparison, a),
    };
    run(kind, args)
}
