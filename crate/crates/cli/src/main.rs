//! `textile-inspect`: generate a synthetic fabric corpus, inspect images, and
//! train, evaluate, tune and prune the defect classifier.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "textile-inspect", version, about)]
struct Cli {
    /// Flat `key = value` file of flag defaults for the subcommand.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// More log output (repeat for debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render a labeled synthetic corpus.
    #[command(args_override_self = true)]
    GenData(GenDataArgs),
    /// Classify one image with a trained model.
    #[command(args_override_self = true)]
    Inspect(InspectArgs),
    /// Train with the repeated train/test protocol and save the reported model.
    #[command(args_override_self = true)]
    Train(TrainArgs),
    /// Score a saved model on a corpus.
    #[command(args_override_self = true)]
    Evaluate(EvaluateArgs),
    /// Vary one GA parameter and write a CSV report.
    #[command(args_override_self = true)]
    Sweep(SweepArgs),
    /// Retrain at decreasing hidden widths and write a CSV report.
    #[command(args_override_self = true)]
    Prune(PruneArgs),
}

const SUBCOMMANDS: [&str; 6] = ["gen-data", "inspect", "train", "evaluate", "sweep", "prune"];

#[derive(Args, Debug, Clone)]
struct PipelineArgs {
    /// Smallest component, in pixels, kept as a defect.
    #[arg(long, default_value_t = 12)]
    min_defect_size: usize,
    /// Smallest gray-level distance between the two histogram peaks.
    #[arg(long, default_value_t = 32)]
    min_peak_distance: u8,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
struct DataArgs {
    /// Corpus directory with images and labels.csv.
    #[arg(long, value_name = "DIR")]
    corpus: Option<PathBuf>,
    /// Precomputed feature CSV instead of a corpus directory.
    #[arg(long, value_name = "FILE")]
    features: Option<PathBuf>,
}

/// Wall-clock budget in seconds; `off` disables it.
#[derive(Clone, Copy, Debug)]
struct TimeBudget(Option<Duration>);

fn parse_budget(s: &str) -> Result<TimeBudget, String> {
    if s.eq_ignore_ascii_case("off") || s.eq_ignore_ascii_case("none") {
        return Ok(TimeBudget(None));
    }
    let secs: f64 = s
        .parse()
        .map_err(|_| format!("expected seconds or `off`, got {s:?}"))?;
    Duration::try_from_secs_f64(secs)
        .ok()
        .filter(|d| !d.is_zero())
        .map(|d| TimeBudget(Some(d)))
        .ok_or_else(|| format!("time budget must be positive, got {s}"))
}

#[derive(Args, Debug, Clone)]
struct GaArgs {
    /// Population size M.
    #[arg(long, default_value_t = 8192)]
    population: usize,
    /// Crossover rate.
    #[arg(long, default_value_t = 0.99)]
    pc: f64,
    /// Per-bit mutation rate.
    #[arg(long, default_value_t = 0.01)]
    pm: f64,
    /// Stop once the best fitness exceeds this.
    #[arg(long, default_value_t = 1000.0)]
    target_fitness: f64,
    #[arg(long, default_value_t = 10_000)]
    max_cycles: u64,
    /// Seconds per training run, or `off`.
    #[arg(long, default_value = "60", value_parser = parse_budget)]
    max_time: TimeBudget,
    /// Bits per encoded weight.
    #[arg(long, default_value_t = 16)]
    bits: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GenDataArgs {
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Image side length.
    #[arg(long, default_value_t = 512)]
    size: usize,
    /// Images per class, in class order.
    #[arg(
        long,
        value_delimiter = ',',
        num_args = 6,
        default_value = "6,16,16,11,18,33"
    )]
    counts: Vec<usize>,
    /// Loop texture amplitude in gray levels.
    #[arg(long, default_value_t = 5)]
    texture: u8,
    /// Uniform noise bound in gray levels.
    #[arg(long, default_value_t = 8)]
    noise: u8,
    /// Skip writing the feature cache.
    #[arg(long)]
    no_features: bool,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args, Debug)]
struct InspectArgs {
    #[arg(long, value_name = "FILE")]
    image: PathBuf,
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Write the gray, filtered, binary and denoised stages here as PGM.
    #[arg(long, value_name = "DIR")]
    debug_stages: Option<PathBuf>,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args, Debug)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    ga: GaArgs,
    /// Hidden units.
    #[arg(long, default_value_t = 26)]
    hidden: usize,
    /// Train/test rounds (3 to 5).
    #[arg(long, default_value_t = 3)]
    rounds: usize,
    /// Where to save the reported model.
    #[arg(long, value_name = "FILE")]
    model_out: PathBuf,
    /// Optional CSV with one row per round.
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SweepParam {
    /// Population size.
    #[value(name = "M")]
    Population,
    /// Crossover rate.
    #[value(name = "Pc")]
    Crossover,
    /// Mutation rate, low range.
    #[value(name = "Pm")]
    Mutation,
    /// Mutation rate, high range.
    #[value(name = "Pm-high")]
    MutationHigh,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    ga: GaArgs,
    #[arg(long, ignore_case = true)]
    param: SweepParam,
    /// Values to try instead of the default list.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    values: Option<Vec<f64>>,
    #[arg(long, default_value_t = 30)]
    hidden: usize,
    /// Train/test rounds per cell.
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct PruneArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    pipeline: PipelineArgs,
    #[command(flatten)]
    ga: GaArgs,
    #[arg(long, default_value_t = 30)]
    start: usize,
    #[arg(long, default_value_t = 2)]
    step: usize,
    #[arg(long, default_value_t = 8)]
    stop: usize,
    /// Extra widths inside the range.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "9")]
    extra: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    rounds: usize,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Also save each width's model here.
    #[arg(long, value_name = "DIR")]
    models_dir: Option<PathBuf>,
}

/// Why a command failed, with its exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(String),
    Invalid(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Io(_) => 2,
            Failure::Invalid(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Io(m) | Failure::Invalid(m) => m,
        }
    }
}

impl From<textile_inspect::Error> for Failure {
    fn from(e: textile_inspect::Error) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

fn run(args: Vec<String>) -> Result<(), Failure> {
    let args = config::expand(args, &SUBCOMMANDS).map_err(|e| match e {
        config::ConfigError::Io(..) => Failure::Io(e.to_string()),
        config::ConfigError::Syntax(m) => Failure::Usage(m),
    })?;
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return Ok(());
        }
        Err(e) => return Err(Failure::Usage(e.render().to_string())),
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let _ = env_logger::Builder::new().parse_filters(level).try_init();
    match cli.command {
        Command::GenData(a) => commands::gen_data(a),
        Command::Inspect(a) => commands::inspect(a),
        Command::Train(a) => commands::train(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Prune(a) => commands::prune(a),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = f.message().trim_end();
            if matches!(f, Failure::Usage(_)) {
                eprintln!("{msg}");
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
