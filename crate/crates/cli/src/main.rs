use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hol_cli::{load_config, run_experiment, CliError, ExperimentConfig, ExperimentKind};

#[derive(Parser)]
#[command(name = "hol", version, about = "Composition-operator eigenfunction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an automorphism and report its normal form
    Classify(Flags),
    /// Iterates and the geometry checks
    Iterate(Flags),
    /// Thin subsequence selection with random placement checks
    ThinSelect(Flags),
    /// Thin Blaschke product from a seed set
    ConstructThin(Flags),
    /// Orbit-limit fits along the selected iterates
    OrbitLimits(Flags),
    /// Recover the seed set from pullbacks of the zeros
    EstimateE(Flags),
    /// Classify the closed span of a kernel set
    SpanClassify(Flags),
    /// Blaschke eigenvector from orbit-closed zeros
    EigBlaschke(Flags),
    /// Outer eigenfunction from a boundary modulus on J
    EigOuter(Flags),
    /// Singular inner eigenfunction from an atomic measure
    EigSingular(Flags),
    /// Verify a combined factorization
    EigVerify(Flags),
    /// Polylines of the fundamental domain and the tiles of J
    DomainPlot(Flags),
}

#[derive(clap::Args)]
struct Flags {
    /// JSON config; defaults are used when absent
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "n-tile")]
    n_tile: Option<u32>,
    #[arg(long)]
    tolerance: Option<f64>,
}

impl Command {
    fn split(self) -> (ExperimentKind, Flags) {
        use ExperimentKind as K;
        match self {
            Self::Classify(f) => (K::Classify, f),
            Self::Iterate(f) => (K::Iterate, f),
            Self::ThinSelect(f) => (K::ThinSelect, f),
            Self::ConstructThin(f) => (K::ConstructThin, f),
            Self::OrbitLimits(f) => (K::OrbitLimits, f),
            Self::EstimateE(f) => (K::EstimateE, f),
            Self::SpanClassify(f) => (K::SpanClassify, f),
            Self::EigBlaschke(f) => (K::EigBlaschke, f),
            Self::EigOuter(f) => (K::EigOuter, f),
            Self::EigSingular(f) => (K::EigSingular, f),
            Self::EigVerify(f) => (K::EigVerify, f),
            Self::DomainPlot(f) => (K::DomainPlot, f),
        }
    }
}

fn run(kind: ExperimentKind, flags: Flags) -> Result<(), CliError> {
    let mut config = match flags.config {
        Some(p) => load_config(&p)?,
        None => ExperimentConfig::default_for(kind),
    };
    if config.experiment != kind {
        return Err(CliError::ConfigInvalid(format!(
            "config is for {}, not {}",
            config.experiment.name(),
            kind.name()
        )));
    }
    if let Some(s) = flags.seed {
        config.seed = s;
    }
    if flags.n_tile.is_some() {
        config.n_tile = flags.n_tile;
    }
    if flags.tolerance.is_some() {
        config.tolerance = flags.tolerance;
    }
    let report = run_experiment(&config, &flags.out)?;
    println!("{}: all {} assertions passed", report.experiment, report.assertions.len());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("HOL_LOG", "warn")).init();
    let cli = Cli::parse();
    let (kind, flags) = cli.command.split();
    match run(kind, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
