use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use srbflow_core::Integrator;

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(
    name = "srbflow",
    version,
    about = "Entropy gradient flows of Lebesgue-preserving expanding circle maps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integrate the n-point simplex ODE.
    Simplex(SimplexArgs),
    /// Integrate the degree-2 Sobolev gradient flow (Galerkin truncation).
    Galerkin(ModesArgs),
    /// Integrate the projected diffusion equation w_t = w_yy / w_y.
    Pde(ModesArgs),
    /// Integrate the L² gradient flow of a degree-n density on a grid.
    Riesz(RieszArgs),
    /// Evaluate the entropy and gradient norm of one density.
    Entropy(EntropyArgs),
    /// Run the oracle check suite and report as JSON.
    Verify(VerifyArgs),
    /// Emit the data behind the reference figures.
    Figure(FigureArgs),
}

/// Integration settings shared by the flow subcommands.
#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// Time step.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time.
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    /// euler or rk4.
    #[arg(long)]
    pub integrator: Option<Integrator>,
    /// Quadrature / state grid size.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Record every k-th step (first and last are always recorded).
    #[arg(long = "record-every")]
    pub record_every: Option<usize>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct IoArgs {
    /// Output file. Defaults to `$SRBFLOW_OUT_DIR/<command>.<ext>`, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json (inferred from --out when omitted).
    #[arg(long)]
    pub format: Option<Format>,
    /// key = value file with defaults for any of the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimplexArgs {
    /// Number of components.
    #[arg(long)]
    pub n: Option<usize>,
    /// Initial point, comma separated. Drawn at random from --seed if absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Args, Debug)]
pub struct ModesArgs {
    /// Degree of the map (only 2 is supported).
    #[arg(long)]
    pub n: Option<usize>,
    /// Truncation: number of odd harmonics kept.
    #[arg(long)]
    pub modes: Option<usize>,
    /// Even initial state: h(τ) = 1/2 + Σ B_k cos((2k−1)τ).
    #[arg(long = "B", value_delimiter = ',', allow_hyphen_values = true)]
    pub big_b: Option<Vec<f64>>,
    /// Cosine coefficients of w = y/2 + Σ a cos((2m−1)πy) + b sin((2m−1)πy).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<f64>>,
    /// Sine coefficients, paired with --a.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Args, Debug)]
pub struct RieszArgs {
    /// Degree of the map.
    #[arg(long)]
    pub n: Option<usize>,
    /// Cosine coefficients of h − 1/n in harmonics of period n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cos: Option<Vec<f64>>,
    /// Sine coefficients of h − 1/n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sin: Option<Vec<f64>>,
    #[command(flatten)]
    pub run: RunArgs,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Args, Debug)]
pub struct EntropyArgs {
    #[arg(long)]
    pub n: Option<usize>,
    /// Degree-2 even density in the B variables.
    #[arg(long = "B", value_delimiter = ',', allow_hyphen_values = true)]
    pub big_b: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub cos: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sin: Option<Vec<f64>>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    /// Deviation h − 1/2 at t = 0, 10, 20.
    Fig1,
    /// Deviation at t = 50 against a matched cosine and the heat equation, ×1000.
    Fig2,
}

#[derive(Args, Debug)]
pub struct FigureArgs {
    pub which: FigureKind,
    /// Number of τ samples on [0, 2π], endpoints included.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[command(flatten)]
    pub io: IoArgs,
}
