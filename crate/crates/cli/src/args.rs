use std::path::PathBuf;

use centered_gamma::certify::Scale;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "centered-gamma",
    version,
    about = "Centered gamma tail probabilities and their monotonicity certificates",
    after_help = "Exit status: 0 success, 1 certified violation, 2 usage error, 3 inconclusive."
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Print JSON instead of CSV or text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Relative tolerance for iterative solvers.
    #[arg(long, global = true, default_value = "1e-12")]
    pub rel_tol: f64,

    /// Absolute tolerance.
    #[arg(long, global = true, default_value = "1e-14")]
    pub abs_tol: f64,

    /// Multiple of the error bound a gap must exceed to count as strict.
    #[arg(long, global = true, default_value_t = 8.0)]
    pub strict_margin: f64,

    /// Iteration cap for root finders and searches.
    #[arg(long, global = true, default_value_t = 200)]
    pub max_iter: usize,

    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate p_c(a) = P(X_a - a > c) for X_a ~ Gamma(a, 1).
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        a: f64,
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        /// Also evaluate the quadrature reference.
        #[arg(long, hide = true)]
        use_oracle: bool,
    },
    /// Tabulate p_c over a grid of shapes.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[command(flatten)]
        grid: Grid,
    },
    /// Certify the direction of a -> p_c(a).
    Certify {
        #[arg(long, allow_hyphen_values = true)]
        c: f64,
        #[command(flatten)]
        grid: OptionalGrid,
    },
    /// Median of Gamma(a, 1) and its offset from a.
    Median {
        #[arg(long, conflicts_with_all = ["a_min", "a_max", "n"])]
        a: Option<f64>,
        #[command(flatten)]
        grid: OptionalGrid,
    },
    /// Geometric, logarithmic, refined and arithmetic means of x < y.
    Means {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Run the full acceptance suite.
    VerifyAll {
        /// Corrupt the kernel tolerance so one criterion fails.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log,
}

impl From<ScaleArg> for Scale {
    fn from(s: ScaleArg) -> Scale {
        match s {
            ScaleArg::Linear => Scale::Linear,
            ScaleArg::Log => Scale::Log,
        }
    }
}

#[derive(Debug, Args)]
pub struct Grid {
    #[arg(long)]
    pub a_min: f64,
    #[arg(long)]
    pub a_max: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = ScaleArg::Log)]
    pub scale: ScaleArg,
}

#[derive(Debug, Args)]
pub struct OptionalGrid {
    #[arg(long)]
    pub a_min: Option<f64>,
    #[arg(long)]
    pub a_max: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = ScaleArg::Log)]
    pub scale: ScaleArg,
}
