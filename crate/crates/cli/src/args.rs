use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "resonance", version, about = "Resonances and eigenvalues of 1D Schrödinger operators")]
pub struct Cli {
    /// INI-style configuration file; flags override its entries.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Output file (stdout when absent).
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Residual tolerance for root refinement.
    #[arg(long, global = true, value_name = "X")]
    pub tol: Option<f64>,

    #[arg(long, short, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub task: TaskCommand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum TaskCommand {
    /// Refine resonances from explicit guesses.
    Solve(SolveArgs),
    /// Locate all zeros of a half-line residual inside a rectangle in z.
    Scan(ScanArgs),
    /// Follow a ladder of resonances, alternating boundary conditions.
    Table(TableArgs),
    /// Support function a(θ) and the envelope of the enclosure.
    Envelope(EnvelopeArgs),
    /// Thresholds, norms and enclosure verdicts.
    Bounds(BoundsArgs),
    /// Resonance shifts of a one-parameter family and the linear prediction.
    Perturb(PerturbArgs),
    /// Locate zeros of the whole-line function φ inside a rectangle in z.
    PhiScan(ScanArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct ProblemArgs {
    /// Builtin potential: zero, gaussian, modified_gaussian, rittby, perturbed_gaussian, square_well.
    #[arg(long)]
    pub potential: Option<String>,

    /// Builtin parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,

    /// Potential as an expression in x.
    #[arg(long, allow_hyphen_values = true)]
    pub expr: Option<String>,

    /// halfline or wholeline.
    #[arg(long)]
    pub domain: Option<String>,

    /// dirichlet, neumann, alternate, or "a,b" for a f(0) + b f'(0) = 0.
    #[arg(long)]
    pub bc: Option<String>,

    /// method-one, method-two or phi.
    #[arg(long)]
    pub method: Option<String>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// Guesses in z, separated by ';' (e.g. "1.5+1.1i;0.7").
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,

    /// Guesses in λ, separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// "re_min,re_max,im_min,im_max" in z.
    #[arg(long, allow_hyphen_values = true)]
    pub rect: Option<String>,

    /// Maximum subdivision depth.
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[arg(long)]
    pub rows: Option<usize>,

    /// The first two guesses in z, separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub seeds: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// Number of θ intervals.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    #[arg(long)]
    pub points: Option<usize>,

    /// Points λ to test against the enclosures, separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,

    /// Increments of the varied parameter, separated by ','.
    #[arg(long, allow_hyphen_values = true)]
    pub eps: Option<String>,

    /// Unperturbed root in z.
    #[arg(long, allow_hyphen_values = true)]
    pub guess: Option<String>,

    /// Builtin parameter that is varied.
    #[arg(long)]
    pub vary: Option<String>,

    /// Derivative of the potential with respect to the varied parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub derivative: Option<String>,

    /// Quadrature nodes for the linear prediction.
    #[arg(long)]
    pub nodes: Option<usize>,
}
