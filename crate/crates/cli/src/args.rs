use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "cayley-gibbs",
    version,
    about = "Ising Gibbs measures on Cayley trees"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fixed points of the boundary-field operator.
    Solve(SolveArgs),
    /// Symbolic reduction for |A| = k.
    Reduce(ReduceArgs),
    /// Solution counts and back-substituted fields at one α.
    Classify(ClassifyArgs),
    /// Solution counts over an α grid.
    Scan(ScanArgs),
    /// Critical α and auxiliary constants.
    Critical(CriticalArgs),
    /// Finite-volume compatibility defect of weakly periodic fields.
    CheckCompat(CompatArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Coupling {
    /// α = (1 − θ)/(1 + θ); takes precedence over --j/--beta.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Coupling constant J.
    #[arg(long = "j", allow_negative_numbers = true)]
    pub j: Option<f64>,
    /// Inverse temperature β.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long = "card-a")]
    pub card_a: usize,
    #[command(flatten)]
    pub coupling: Coupling,
    /// none, I1, I2 or I3.
    #[arg(long, default_value = "none")]
    pub restrict: String,
    /// Multistart jitter seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long = "alpha-min")]
    pub alpha_min: f64,
    #[arg(long = "alpha-max")]
    pub alpha_max: f64,
    /// Number of grid points, endpoints included.
    #[arg(long)]
    pub steps: usize,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CriticalArgs {
    #[arg(long)]
    pub k: usize,
    /// Upper end of the α scan.
    #[arg(long = "alpha-max", default_value_t = 50.0)]
    pub alpha_max: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct CompatArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long = "card-a")]
    pub card_a: usize,
    #[command(flatten)]
    pub coupling: Coupling,
    /// Radius of the outer ball.
    #[arg(long)]
    pub n: usize,
    /// Explicit field vector h1,h2,h3,h4; otherwise every solved fixed point.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub h: Option<Vec<f64>>,
    /// Solver restriction when no vector is given.
    #[arg(long, default_value = "none")]
    pub restrict: String,
    /// anchored or recursion.
    #[arg(long = "root-rule", default_value = "anchored")]
    pub root_rule: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}
