//! `sbrm`: exact moments, limiting laws, densities, simulation and
//! verification for sparse random block matrices.
//!
//! Exit codes: 0 success, 1 a requested check failed, 2 usage error,
//! 3 internal invariant breach or I/O failure.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "sbrm", version, about = "Spectral moments of sparse random block matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentModel {
    Adjacency,
    Laplacian,
    DiagBlock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimModel {
    Adjacency,
    Laplacian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    Em,
    Mp,
    PasturBlock,
    ShiftedSemicircle,
    Semicircle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Tables,
    Limits,
    D1,
    Narayana,
    Mc,
    Stretch,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact N -> infinity moment as a polynomial in t with coefficients rational in d.
    Moments {
        #[arg(long, value_enum)]
        model: MomentModel,
        #[arg(long)]
        order: usize,
        /// Evaluate exactly at this t (integer, p/q or decimal).
        #[arg(long)]
        t: Option<String>,
        /// Evaluate exactly at this block dimension d.
        #[arg(long)]
        d: Option<String>,
        /// Raise the order cap (adjacency 18, laplacian 10, diag-block 8).
        #[arg(long)]
        max_order: Option<usize>,
        /// Also print a best-effort c_m display (not canonical).
        #[arg(long)]
        c_form: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Cache directory (overrides SBRM_CACHE_DIR).
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Neither read nor write the cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Moment of the d -> infinity law as a polynomial in t.
    LimitMoments {
        #[arg(long, value_enum)]
        model: MomentModel,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        t: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Density of a limiting law sampled on a uniform grid.
    Density {
        #[arg(long, value_enum)]
        law: LawArg,
        #[arg(long)]
        t: f64,
        /// Number of grid points.
        #[arg(long, default_value_t = 401)]
        grid: usize,
        /// Grid range `lo:hi`; defaults to the support hull with a 5% margin.
        #[arg(long)]
        range: Option<String>,
        /// Distance from the real axis for Stieltjes inversion (em only).
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        /// Output file; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: CurveFormat,
    },
    /// Sample the finite-N ensemble and compare moments with the exact values.
    Simulate {
        #[arg(long, value_enum)]
        model: SimModel,
        #[arg(long = "N")]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long = "Z")]
        z: f64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated moment orders.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        orders: Vec<usize>,
        /// Highest order allowed in --orders.
        #[arg(long, default_value_t = sbrm_core::montecarlo::DEFAULT_ORDER_CAP)]
        order_cap: usize,
        /// Fail (exit 1) if any |z-score| exceeds this.
        #[arg(long, default_value_t = 4.0)]
        gate: f64,
        /// Eigenvalue histogram with this many bins (dense diagonalization).
        #[arg(long, requires = "histogram_out")]
        histogram: Option<usize>,
        /// CSV file for the histogram.
        #[arg(long, requires = "histogram")]
        histogram_out: Option<PathBuf>,
        /// Binary dump of the first sampled matrix.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Run verification suites and print a pass/fail table.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Wall-time budget of the stretch suite in seconds.
        #[arg(long, default_value_t = 120.0)]
        stretch_budget: f64,
        /// Print details of passing checks too.
        #[arg(long, short)]
        verbose: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Moments { model, order, t, d, max_order, c_form, format, cache_dir, no_cache } => {
            let cache = cache::Cache::from_flags(cache_dir.as_deref(), no_cache);
            commands::moments(&commands::MomentsArgs { model, order, t, d, max_order, c_form, format }, cache.as_ref())
        }
        Command::LimitMoments { model, order, t, format } => commands::limit_moments(model, order, t.as_deref(), format),
        Command::Density { law, t, grid, range, eps, out, format } => {
            commands::density(law, t, grid, range.as_deref(), eps, out.as_deref(), format)
        }
        Command::Simulate { model, n, d, z, samples, seed, orders, order_cap, gate, histogram, histogram_out, dump, format } => {
            let params = sbrm_core::montecarlo::EnsembleParams { n, d, z, samples, seed };
            commands::simulate(&commands::SimulateArgs {
                model,
                params,
                orders,
                order_cap,
                gate,
                histogram: histogram.zip(histogram_out),
                dump,
                format,
            })
        }
        Command::Verify { suite, stretch_budget, verbose, format } => commands::verify(suite, stretch_budget, verbose, format),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sbrm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
