//! `lrk`: spectra, winding numbers, Otto/Stirling cycles and parameter sweeps
//! of the long-range Kitaev chain.

mod commands;
mod config;
mod figures;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ConfigError, Grid, Range};
use crate::output::Format;

#[derive(Parser)]
#[command(name = "lrk", version, about = "Long-range Kitaev chain heat engines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Single-particle energy levels over a range of mu.
    Spectrum(SpectrumArgs),
    /// Winding number of the Bloch vector over a range of mu.
    Winding(WindingArgs),
    /// One Otto cycle, or a curve over mu_f / mu_i with --sweep-mu.
    Otto(CycleArgs),
    /// One Stirling cycle, or a curve over mu_f / mu_i with --sweep-mu.
    Stirling(CycleArgs),
    /// Maximum ratios over the (alpha, beta_h / beta_c) plane.
    Sweep(SurfaceArgs),
    /// Enhancement regions (R_W > 1 and R_eta > 1) over (mu_f / mu_i, beta_h / beta_c).
    Regions(RegionArgs),
    /// Location of the largest R_W,m and R_eta,m over (alpha, beta_h / beta_c).
    Optimal(SurfaceArgs),
    /// Data and gnuplot scripts for one figure (1, 3-10).
    ReproduceFigure(FigureArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::Winding(_) => "winding",
            Command::Otto(_) => "otto",
            Command::Stirling(_) => "stirling",
            Command::Sweep(_) => "sweep",
            Command::Regions(_) => "regions",
            Command::Optimal(_) => "optimal",
            Command::ReproduceFigure(_) => "reproduce-figure",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Spectrum(a) => &a.common,
            Command::Winding(a) => &a.common,
            Command::Otto(a) | Command::Stirling(a) => &a.common,
            Command::Sweep(a) | Command::Optimal(a) => &a.common,
            Command::Regions(a) => &a.common,
            Command::ReproduceFigure(a) => &a.common,
        }
    }
}

fn grid_arg(s: &str) -> Result<Grid, String> {
    config::parse_grid(s).map(Grid)
}

fn range_arg(s: &str) -> Result<Range, String> {
    config::parse_range(s).map(Range)
}

/// Options shared by every subcommand.
#[derive(Args)]
struct Common {
    /// `key = value` file, or a run-manifest.json to replay.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Also write a gnuplot script next to each CSV table.
    #[arg(long)]
    plots: bool,
    /// Worker threads for sweeps.
    #[arg(long, env = "LRK_WORKERS")]
    workers: Option<usize>,
}

/// The medium. `alpha` is a number or `inf` (nearest-neighbour pairing).
#[derive(Args)]
struct ChainArgs {
    /// Number of sites (even).
    #[arg(long = "L", visible_alias = "sites")]
    sites: Option<usize>,
    /// Hopping amplitude.
    #[arg(long = "J", visible_alias = "hopping", allow_negative_numbers = true)]
    hopping: Option<f64>,
    /// Pairing amplitude.
    #[arg(
        long = "Delta",
        visible_alias = "pairing",
        allow_negative_numbers = true
    )]
    pairing: Option<f64>,
}

#[derive(Args)]
struct MuScan {
    #[arg(long, allow_negative_numbers = true)]
    mu_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu_max: Option<f64>,
    #[arg(long)]
    mu_steps: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, value_parser = range_arg)]
    alpha: Option<Range>,
    #[command(flatten)]
    scan: MuScan,
}

#[derive(Args)]
struct WindingArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, value_parser = range_arg)]
    alpha: Option<Range>,
    /// A single chemical potential instead of a scan.
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[command(flatten)]
    scan: MuScan,
    /// Sample points around the Brillouin zone.
    #[arg(long)]
    grid_density: Option<usize>,
}

#[derive(Args)]
struct CycleArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    chain: ChainArgs,
    #[arg(long, value_parser = range_arg)]
    alpha: Option<Range>,
    #[arg(long)]
    mu_i: Option<f64>,
    /// Required unless --sweep-mu.
    #[arg(long)]
    mu_f: Option<f64>,
    #[arg(long)]
    beta_c: Option<f64>,
    /// beta_h / beta_c.
    #[arg(long)]
    beta_ratio: Option<f64>,
    /// Sweep mu_f / mu_i over --mu-ratio-grid and compare with the short-range chain.
    #[arg(long)]
    sweep_mu: bool,
    #[arg(long, value_parser = grid_arg)]
    mu_ratio_grid: Option<Grid>,
    /// Polish the curve maxima by golden-section search.
    #[arg(long)]
    refine: bool,
}

#[derive(Args)]
struct SweepGrids {
    #[arg(long)]
    mu_i: Option<f64>,
    #[arg(long)]
    beta_c: Option<f64>,
    #[arg(long, value_parser = grid_arg)]
    mu_ratio_grid: Option<Grid>,
    #[arg(long, value_parser = grid_arg)]
    beta_ratio_grid: Option<Grid>,
}

#[derive(Args)]
struct SurfaceArgs {
    #[command(flatten)]
    common: Common,
    /// otto or stirling.
    #[arg(long)]
    cycle: Option<String>,
    #[command(flatten)]
    chain: ChainArgs,
    #[command(flatten)]
    grids: SweepGrids,
    #[arg(long, value_parser = grid_arg)]
    alpha_grid: Option<Grid>,
}

#[derive(Args)]
struct RegionArgs {
    #[command(flatten)]
    common: Common,
    /// otto or stirling.
    #[arg(long)]
    cycle: Option<String>,
    #[command(flatten)]
    chain: ChainArgs,
    /// Several exponents; one map per value.
    #[arg(long, value_parser = grid_arg)]
    alphas: Option<Grid>,
    #[command(flatten)]
    grids: SweepGrids,
}

#[derive(Args)]
struct FigureArgs {
    /// Figure number.
    figure: Option<usize>,
    #[command(flatten)]
    common: Common,
    /// Sample alpha densely (100 values) instead of six representative values.
    #[arg(long)]
    dense: bool,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Core(lrk_core::Error),
    Contract(String),
    Io(std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core(_) | CliError::Contract(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Core(e) => write!(f, "numerical error: {e}"),
            CliError::Contract(e) => write!(f, "contract violation: {e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<lrk_core::Error> for CliError {
    fn from(e: lrk_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lrk: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
