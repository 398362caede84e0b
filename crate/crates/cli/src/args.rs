use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand};
use qgchi::euler::Formula;

#[derive(Debug, Parser)]
#[command(
    name = "qgchi",
    version,
    about = "Euler characteristic of quantum graphs from their spectra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a metric graph file.
    Gen(GenArgs),
    /// Solve for the lowest levels of a graph.
    Spectrum(SpectrumArgs),
    /// Evaluate an Euler characteristic curve and detect its plateau.
    Chi(ChiArgs),
    /// Convert a resonance list to a spectrum and screen for missing levels.
    Ingest(IngestArgs),
    /// Run the full pipeline on a graph or a spectrum.
    Analyze(AnalyzeArgs),
    /// Drop and jitter levels of a spectrum.
    Perturb(PerturbArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("family").required(true).args(["complete", "random"])))]
pub struct GenArgs {
    /// Complete graph on this many vertices.
    #[arg(long, value_name = "N")]
    pub complete: Option<usize>,
    /// Random connected graph on this many vertices.
    #[arg(long, value_name = "N", requires = "edges")]
    pub random: Option<usize>,
    /// Edge count of the random graph.
    #[arg(long, value_name = "M")]
    pub edges: Option<usize>,
    /// Shortest edge length in meters.
    #[arg(long)]
    pub lmin: f64,
    /// Total length in meters.
    #[arg(long)]
    pub total: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Number of levels to solve for.
    #[arg(long)]
    pub count: usize,
    /// Initial guess for the scan ceiling in 1/m.
    #[arg(long)]
    pub k_max_hint: Option<f64>,
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Also export the levels as a GHz resonance file.
    #[arg(long, value_name = "PATH")]
    pub resonances: Option<PathBuf>,
    /// Dielectric constant recorded in the resonance file.
    #[arg(long, default_value_t = 1.0)]
    pub dielectric: f64,
    #[arg(long, default_value = "synthetic")]
    pub label: String,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    /// Lower end of the t range in 1/m.
    #[arg(long)]
    pub t_lo: Option<f64>,
    /// Upper end of the t range in 1/m.
    #[arg(long)]
    pub t_hi: Option<f64>,
    /// Number of log-spaced t samples.
    #[arg(long)]
    pub t_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ChiArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    /// Number of lowest levels used; all when omitted.
    #[arg(long = "K", value_name = "K")]
    pub terms: Option<usize>,
    #[arg(long, default_value = "new")]
    pub formula: Formula,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Curve file; not written when omitted.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["graph", "spectrum"])))]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Levels to solve in graph mode; defaults to the number of terms.
    #[arg(long, requires = "graph")]
    pub count: Option<usize>,
    /// Number of terms in the estimator.
    #[arg(long = "K", value_name = "K")]
    pub terms: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value = "new")]
    pub formula: Formula,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Result file; stdout when omitted.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
    /// Curve file; derived from the result path when omitted.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[arg(long)]
    pub spectrum: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    pub drop_probability: f64,
    /// 1-based index of the first level that may be dropped.
    #[arg(long, default_value_t = 1)]
    pub drop_min_index: usize,
    /// Relative standard deviation of the multiplicative jitter.
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long = "output")]
    pub output: PathBuf,
}
