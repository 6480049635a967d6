use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "perc",
    version,
    about = "Exact and Monte Carlo percolation experiments"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Sampling threads; 0 = all cores, 1 = sequential. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
    /// Output path. The extension is replaced by .csv / .svg as needed.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Svg,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact theta-graph polynomials, differences and roots.
    Exact(ExactArgs),
    /// Bisection for the crossing F(p) = p on the Z^d box.
    Tauc(TaucArgs),
    /// P(o <-> t·e) along the origin edge in the pipe-dust model.
    Dustpipe(DustArgs),
    /// Triangle quantities A and B and lattice conditional probabilities.
    Triangle(TriangleArgs),
    /// Smallest theta graph whose peak beats its middle above beta.
    Counterexample(CounterexampleArgs),
    /// Run every acceptance check and write a markdown report.
    ReproducePaper(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[arg(value_enum)]
    pub what: ExactWhat,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = TargetArg::Peak)]
    pub target: TargetArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExactWhat {
    /// Connection polynomial, coefficients from p^0 up.
    Theta,
    /// Peak minus middle.
    Diff,
    /// Crossing of peak and middle in (0, 1).
    Root,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Peak,
    Middle,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,
}

#[derive(Debug, Args)]
pub struct TaucArgs {
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[command(flatten)]
    pub mc: McArgs,
    #[arg(long, default_value_t = 0.3)]
    pub lo: f64,
    #[arg(long, default_value_t = 0.9)]
    pub hi: f64,
    #[arg(long, default_value_t = 4)]
    pub iterations: usize,
}

#[derive(Debug, Args)]
pub struct DustArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// start:end:step, end inclusive.
    #[arg(long, default_value = "0.1:1.0:0.1")]
    pub grid: String,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct TriangleArgs {
    #[arg(long)]
    pub p: f64,
    #[command(flatten)]
    pub mc: McArgs,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub beta: f64,
    /// Largest n the search will build.
    #[arg(long, default_value_t = 2000)]
    pub max_n: usize,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Multiplier on every sample count; 1 is the full acceptance scale.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, default_value_t = 20240601)]
    pub seed: u64,
}
