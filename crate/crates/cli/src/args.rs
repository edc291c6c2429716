use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use qseg_core::{BlendMode, CandidateClass, KnotSpacing, StandardFn};
use qseg_profiler::{Aggregator, Builtin};

/// Piecewise quadratic models of functions and measured runtimes.
#[derive(Debug, Parser)]
#[command(name = "qseg", version, about, propagate_version = true)]
pub struct Cli {
    /// More log output (-v info, -vv debug); RUST_LOG overrides.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a piecewise model of a sample file or a named function.
    Approx(ApproxArgs),
    /// Measure a target over per-variable grids and build its runtime profile.
    Profile(ProfileArgs),
    /// Rank complexity classes for a profile document or a sample file.
    Classify(ClassifyArgs),
    /// Evaluate a stored model (or its derivative) at a point.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["input", "function"])))]
pub struct ApproxArgs {
    /// `x,y` CSV with an odd number of rows.
    #[arg(long, value_name = "CSV")]
    pub input: Option<PathBuf>,

    /// Named function: log2, cospix, exp2 or ratio.
    #[arg(long = "fn", value_name = "NAME")]
    pub function: Option<StandardFn>,

    /// Lower end of the domain (defaults per function).
    #[arg(long, requires = "function", allow_negative_numbers = true)]
    pub from: Option<f64>,

    /// Upper end of the domain (defaults per function).
    #[arg(long, requires = "function", allow_negative_numbers = true)]
    pub to: Option<f64>,

    /// Number of quadratic segments (defaults per function).
    #[arg(long, requires = "function")]
    pub segments: Option<usize>,

    /// Knot placement: uniform or geometric (defaults per function).
    #[arg(long, requires = "function")]
    pub spacing: Option<KnotSpacing>,

    /// pure-lagrange, paper-secant or endpoint-secant.
    #[arg(long, default_value_t = BlendMode::default())]
    pub mode: BlendMode,

    /// Write the JSON report here.
    #[arg(long, value_name = "JSON")]
    pub out: Option<PathBuf>,

    /// Write dense plot data (CSV) here.
    #[arg(long, value_name = "CSV")]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["target", "exec"])))]
pub struct ProfileArgs {
    /// Builtin target: binary-search, merge-sort, search-sort or custom.
    #[arg(long, value_name = "NAME")]
    pub target: Option<Builtin>,

    /// External command line (shell quoting rules, no shell involved);
    /// run as `CMD --var NAME=VALUE ...`.
    #[arg(long, value_name = "CMD")]
    pub exec: Option<String>,

    /// `VAR=lo:hi:n` (n odd), optional `:geo` for constant-ratio spacing.
    /// Repeat per variable. Builtins use their default grids when none is given.
    #[arg(long = "grid", value_name = "SPEC")]
    pub grids: Vec<String>,

    /// Timed repetitions per grid point.
    #[arg(long, default_value_t = qseg_profiler::MeasureConfig::default().repetitions)]
    pub reps: usize,

    /// Untimed runs per grid point before the timed ones.
    #[arg(long, default_value_t = 1)]
    pub warmup: usize,

    /// median or mean.
    #[arg(long, default_value_t = Aggregator::default())]
    pub aggregator: Aggregator,

    /// Seed for generated input data.
    #[arg(long, env = "QSEG_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Blend mode for the fitted segments.
    #[arg(long, default_value_t = BlendMode::default())]
    pub mode: BlendMode,

    /// Write the profile document here.
    #[arg(long, value_name = "JSON")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["profile", "input"])))]
pub struct ClassifyArgs {
    /// Profile document; the classification is written back into it.
    #[arg(long, value_name = "JSON")]
    pub profile: Option<PathBuf>,

    /// `x,y` CSV.
    #[arg(long, value_name = "CSV")]
    pub input: Option<PathBuf>,

    /// Comma-separated classes (const, log, sqrt, linear, nlogn, quadratic, exp, loglog).
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub candidates: Option<Vec<CandidateClass>>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Profile or approximation document.
    #[arg(long, value_name = "JSON")]
    pub model: PathBuf,

    /// Point to evaluate.
    #[arg(long, allow_negative_numbers = true)]
    pub at: f64,

    /// Profile variable (needed when the document has several).
    #[arg(long = "var", value_name = "NAME")]
    pub variable: Option<String>,

    /// Print left and right derivatives instead of the value.
    #[arg(long)]
    pub derivative: bool,
}
