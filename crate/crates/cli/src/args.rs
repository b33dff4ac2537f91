use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "greedy", version, about = "Greedy approximation over finite dictionaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run WGA(t,b) or OGA on a signal and write the trace.
    Run(RunArgs),
    /// Tabulate a closed-form bound as `m,value` rows.
    Bounds(BoundsArgs),
    /// Run the noisy-signal stability experiment.
    Stability(StabilityArgs),
    /// Reproduce a demonstration.
    #[command(subcommand)]
    Demo(DemoCommand),
    /// Generate a dictionary.
    GenDict(GenDictArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Wga,
    Oga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Policy {
    Max,
    ThresholdFirst,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Weakness schedule: a constant `--t` or an explicit list in a file.
#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Constant weakness parameter t in (0,1].
    #[arg(long, conflicts_with = "tau")]
    pub t: Option<f64>,
    /// File with a nonincreasing list of t_k (comma or newline separated).
    #[arg(long)]
    pub tau: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    /// Dictionary file (`.json` or CSV).
    #[arg(long)]
    pub dict: PathBuf,
    /// Signal file: one CSV row.
    #[arg(long)]
    pub signal: PathBuf,
    /// Relaxation parameter b in (0,1] (WGA only).
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[arg(long, value_enum, default_value_t = Policy::Max)]
    pub policy: Policy,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Stop once the residual norm drops to this value.
    #[arg(long, default_value_t = 1e-12)]
    pub atol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Clean,
    Noisy,
    NoisyConst,
    OgaNoisy,
    OgaClean,
    Hl1,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 0.9)]
    pub h: f64,
    /// Noise level epsilon.
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Scale B of the clean signal's A1 membership.
    #[arg(long = "B", default_value_t = 1.0)]
    pub scale: f64,
    /// Norm of the noisy signal.
    #[arg(long, default_value_t = 1.0)]
    pub f_norm: f64,
    /// Initial bound C of the recursion (hl1).
    #[arg(long = "c", default_value_t = 1.0)]
    pub c: f64,
    /// Constant increment v_k (hl1).
    #[arg(long, conflicts_with = "v_file")]
    pub v: Option<f64>,
    /// File with the increments v_k (hl1).
    #[arg(long)]
    pub v_file: Option<PathBuf>,
    #[arg(long)]
    pub m_max: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Noise {
    Exact,
    AtMost,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    /// Dictionary file (`.json` or CSV).
    #[arg(long, conflicts_with = "gen", required_unless_present = "gen")]
    pub dict: Option<PathBuf>,
    /// Generated dictionary: `orthonormal:DIM`, `random:N:DIM` or `coherent:N:DIM`.
    #[arg(long)]
    pub gen: Option<String>,
    #[arg(long = "B", default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 8)]
    pub sparsity: usize,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.9)]
    pub h: f64,
    #[command(flatten)]
    pub schedule: ScheduleArgs,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, value_enum, default_value_t = Policy::Max)]
    pub policy: Policy,
    /// Defaults to floor(eps^-2); larger values are capped there.
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum, default_value_t = Noise::Exact)]
    pub noise: Noise,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent trials; trial i uses seed + i.
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    /// Worker threads for trials.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum DemoCommand {
    /// One PGA step on two nearby inputs.
    Instability {
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Coordinate truncation as a stable linear method.
    Linear {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DictKind {
    Orthonormal,
    RandomUnit,
    Coherent,
}

#[derive(Debug, Args)]
pub struct GenDictArgs {
    #[arg(long, value_enum)]
    pub kind: DictKind,
    #[arg(long)]
    pub dim: usize,
    /// Number of atoms; defaults to `dim`.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
