use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use simplex_moments::quadrature::DEFAULT_GAUSS_NODES;

/// Tolerance used by `compare` (and the oracle scheme) when none is given.
pub const DEFAULT_COMPARE_TOL: f64 = 1e-8;
pub const DEFAULT_MC_SAMPLES: u64 = 100_000;

#[derive(Debug, Parser)]
#[command(name = "simplex-moments", version)]
#[command(about = "Posterior moments and integrals over the probability simplex")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact per-bin mean, variance, standard deviation and skewness
    Moments {
        #[command(flatten)]
        counts: CountsArgs,
        #[command(flatten)]
        moments: MomentArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Integrate the likelihood times a prior over the simplex
    Integrate {
        #[command(flatten)]
        counts: CountsArgs,
        /// Prior expression in p1..pn
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        prior: String,
        #[command(flatten)]
        scheme: SchemeArgs,
        #[command(flatten)]
        moments: MomentArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check the closed form against separable, grid and oracle quadrature
    Compare {
        #[command(flatten)]
        counts: CountsArgs,
        /// Gauss-Legendre nodes per angle axis
        #[arg(long, default_value_t = DEFAULT_GAUSS_NODES)]
        nodes: usize,
        /// Largest allowed pairwise relative deviation
        #[arg(long, default_value_t = DEFAULT_COMPARE_TOL)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CountsArgs {
    /// Comma-separated counts, e.g. 2,0,1
    #[arg(long, allow_hyphen_values = true)]
    pub counts: Option<String>,
    /// File with one count per line; `#` starts a comment
    #[arg(long)]
    pub counts_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    /// Moment multi-index as 1-based bins, e.g. 1,1,2 for p1^2 p2; repeatable
    #[arg(long = "moment", value_name = "i[,j,...]")]
    pub moment: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeName {
    Gauss,
    Mc,
    Oracle,
}

#[derive(Debug, Args)]
pub struct SchemeArgs {
    #[arg(long, value_enum, default_value_t = SchemeName::Gauss)]
    pub scheme: SchemeName,
    /// Gauss-Legendre nodes per angle axis
    #[arg(long, default_value_t = DEFAULT_GAUSS_NODES)]
    pub nodes: usize,
    /// Monte Carlo sample count
    #[arg(long, default_value_t = DEFAULT_MC_SAMPLES)]
    pub samples: u64,
    /// Monte Carlo seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance of the oracle scheme
    #[arg(long, default_value_t = DEFAULT_COMPARE_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Print one number per line instead of the JSON report
    #[arg(long)]
    pub plain: bool,
}
