mod commands;
mod config;
mod presets;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spectral_forge::Transformation;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] spectral_forge::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid config {}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
}

/// Community-preserving random graph generation and evaluation.
#[derive(Debug, Parser)]
#[command(name = "sgforge", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw one synthetic graph from an input edge list.
    Generate(GenerateArgs),
    /// Compare an output graph against its input.
    Eval(EvalArgs),
    /// Modularity ratio, entropy and attack rate over an alpha grid, or the
    /// normalization-rule study with `--study normalization`.
    Sweep(SweepArgs),
    /// Run the seed-based distance-vector attack on two graphs.
    Attack(AttackArgs),
    /// Repeated-run experiment of several strategies on a dataset.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct Common {
    /// TOML file with default settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed; every random choice derives from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; defaults to standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Directory for output files with default names.
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SgfArgs {
    /// Fraction of eigenpairs kept, in [0, 1].
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    rule: Option<RuleName>,
    /// Steepness of the logistic rule, in [2, 10].
    #[arg(long)]
    logistic_k: Option<f64>,
    #[arg(long, value_enum)]
    transformation: Option<TransformationName>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleName {
    Logistic,
    Truncate,
    Scale,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TransformationName {
    Modularity,
    Adjacency,
}

impl From<TransformationName> for Transformation {
    fn from(t: TransformationName) -> Self {
        match t {
            TransformationName::Modularity => Transformation::Modularity,
            TransformationName::Adjacency => Transformation::Adjacency,
        }
    }
}

#[derive(Debug, Args)]
struct PresetArgs {
    /// Synthetic input instead of `--input`: girvan, lancichinetti or planted.
    #[arg(long)]
    preset: Option<String>,
    /// Number of preset graphs.
    #[arg(long)]
    graphs: Option<usize>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    communities: Option<usize>,
    #[arg(long)]
    p_in: Option<f64>,
    #[arg(long)]
    p_out: Option<f64>,
    /// Expected inter-community degree of the girvan preset.
    #[arg(long)]
    out_degree: Option<f64>,
    #[arg(long)]
    mean_degree: Option<f64>,
    #[arg(long)]
    mean_community_size: Option<f64>,
    #[arg(long)]
    mixing: Option<f64>,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    sgf: SgfArgs,
    /// Input edge list.
    #[arg(long)]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[command(flatten)]
    common: Common,
    /// Input (original) edge list.
    #[arg(long)]
    input: PathBuf,
    /// Output (generated) edge list, aligned with the input by node index.
    #[arg(long)]
    compare_to: PathBuf,
    /// Node attribute CSV for the input graph.
    #[arg(long)]
    attrs: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    sgf: SgfArgs,
    #[command(flatten)]
    preset: PresetArgs,
    #[arg(long)]
    input: Option<PathBuf>,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    alphas: Option<String>,
    /// Runs per alpha.
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed_fraction: Option<f64>,
    /// `normalization` runs the normalization-rule study on random
    /// Erdős–Rényi and Barabási–Albert graphs.
    #[arg(long)]
    study: Option<String>,
}

#[derive(Debug, Args)]
struct AttackArgs {
    #[command(flatten)]
    common: Common,
    /// Original edge list.
    #[arg(long)]
    input: PathBuf,
    /// Anonymized edge list.
    #[arg(long)]
    compare_to: PathBuf,
    #[arg(long)]
    seed_fraction: Option<f64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    preset: PresetArgs,
    /// Input edge lists forming one dataset each.
    #[arg(long, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Node attribute CSV applied to every `--input` graph.
    #[arg(long)]
    attrs: Option<PathBuf>,
    /// Comma-separated, e.g. `sgf:0.9,dcsbm,trajanovski`.
    #[arg(long)]
    strategies: Option<String>,
    /// Runs per (strategy, graph).
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    logistic_k: Option<f64>,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("SGF_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("SGF_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {threads} threads: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Generate(args) => commands::generate(args),
        Command::Eval(args) => commands::eval(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Attack(args) => commands::attack(args),
        Command::Bench(args) => commands::bench(args),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
