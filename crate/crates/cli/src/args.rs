use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "auxetic",
    version,
    about = "Deformation paths and auxetic intervals of two-orbit periodic frameworks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Trace every loop of a four-bar linkage and its diagonal lattice.
    Quad(QuadArgs),
    /// Continue a two-orbit framework from a JSON spec file.
    Framework(FrameworkArgs),
    /// Fit and classify the conic through five points.
    Conic(ConicArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Samples per loop of a traced linkage.
    #[arg(long, default_value_t = 1024)]
    pub samples: usize,
    /// Classification tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Record the wall-clock time in summary.json.
    #[arg(long)]
    pub timestamp: bool,
}

#[derive(Debug, Args)]
pub struct QuadArgs {
    /// Bar lengths AB,BC,CD,DA.
    #[arg(long, value_delimiter = ',', num_args = 1, required = true, allow_negative_numbers = true)]
    pub lengths: Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FrameworkArgs {
    /// JSON spec file.
    pub spec: PathBuf,
    /// Continuation step length.
    #[arg(long, default_value_t = 1e-2)]
    pub step: f64,
    /// Step budget per direction.
    #[arg(long, default_value_t = 100_000)]
    pub max_steps: usize,
    /// Relative λ_min(ω) at which the lattice counts as degenerate.
    #[arg(long, default_value_t = 1e-9)]
    pub boundary_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct ConicArgs {
    /// Five points as `x,y` pairs separated by spaces or semicolons.
    #[arg(long, conflicts_with = "file", allow_hyphen_values = true)]
    pub points: Option<String>,
    /// File with the points, either in the same text form or as a JSON
    /// array of `[x, y]` pairs.
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
