use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

/// Exit code for invalid input or parameters.
const EXIT_VALIDATION: u8 = 2;
/// Exit code for unreadable or unwritable files.
const EXIT_IO: u8 = 3;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl From<classext::Error> for CliError {
    fn from(e: classext::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "classext",
    version,
    about = "Discord, classical extensions and annealed extension search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Entropies, mutual information, classical correlation and discord of a state.
    Discord(DiscordArgs),
    /// Haar-random two-qubit states: EoF and discord per rank.
    Scatter(ScatterArgs),
    /// Discord and EoF along a one-parameter family.
    Curve(CurveArgs),
    /// Classical-quantum extension of a product ensemble.
    Extend(ExtendArgs),
    /// Ancilla dimension bound for one `(d_a, d_b)` pair.
    Bound(BoundArgs),
    /// Ancilla bounds for d = 1..4.
    Table1(Table1Args),
    /// Annealed search over the symmetric classical-quantum ansatz.
    Search(SearchArgs),
    /// MUB or SIC candidate state in dimension d.
    Mdss(MdssArgs),
    /// Correlation-matrix rank and genuineness of a state.
    Genuine(GenuineArgs),
}

#[derive(Args, Debug, Clone)]
pub struct StateSource {
    /// Built-in family (alpha, beta, werner, max_l4, max_l3, max_l2, tilde_max).
    #[arg(long, conflicts_with = "file")]
    pub family: Option<String>,
    /// Family parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub param: Option<f64>,
    /// State file (JSON matrix envelope with dims).
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 48)]
    pub coarse_grid: usize,
    #[arg(long, default_value_t = 25)]
    pub refine_iters: usize,
    #[arg(long, default_value_t = 0.5)]
    pub refine_shrink: f64,
    #[arg(long, default_value_t = 3)]
    pub restarts: usize,
    /// Seed for the optimizer's random restarts.
    #[arg(long, default_value_t = 0)]
    pub opt_seed: u64,
}

#[derive(Args, Debug)]
pub struct DiscordArgs {
    #[command(flatten)]
    pub source: StateSource,
    /// Measured side.
    #[arg(long, default_value = "a")]
    pub side: String,
    #[command(flatten)]
    pub opt: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScatterArgs {
    /// Samples per rank.
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
    pub ranks: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub opt: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    #[arg(long, default_value = "alpha")]
    pub family: String,
    /// Evenly spaced points over the family's range.
    #[arg(long, default_value_t = 101, conflicts_with = "grid")]
    pub points: usize,
    /// Explicit parameter values.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub grid: Option<Vec<f64>>,
    #[command(flatten)]
    pub opt: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinEnsemble {
    ZSet,
    WSet,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    /// Ensemble file (weights, a_kets, b_kets).
    #[arg(long, conflicts_with = "builtin")]
    pub ensemble: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<BuiltinEnsemble>,
    /// Where to write the extended state.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the diagnostics JSON (stdout otherwise).
    #[arg(long)]
    pub diagnostics_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub d_a: usize,
    #[arg(long)]
    pub d_b: usize,
    #[arg(long, conflicts_with = "rank", required_unless_present = "rank")]
    pub length: Option<usize>,
    /// Report the range for lengths in [rank, rank²].
    #[arg(long)]
    pub rank: Option<usize>,
    /// Also report classical-classical ancilla pairs.
    #[arg(long)]
    pub cc: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct Table1Args {
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Flat TOML file with any of the annealing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Named schedule: desk (also accepted as paper or paper-desk).
    #[arg(long)]
    pub preset: Option<String>,
    #[arg(long)]
    pub d_ancilla: Option<usize>,
    #[arg(long)]
    pub d_a: Option<usize>,
    /// Steps per temperature.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub chains: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_delimiter = ',')]
    pub temperatures: Option<Vec<f64>>,
    #[arg(long)]
    pub step_eps: Option<f64>,
    #[arg(long)]
    pub eps_decay: Option<f64>,
    /// Result JSON (best unitary, discords, config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Per-step trace CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Mub,
    Sic,
}

#[derive(Args, Debug)]
pub struct MdssArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long, value_enum)]
    pub construction: Construction,
    /// Fiducial ket file (re/im arrays); needed for SICs with d > 2.
    #[arg(long)]
    pub fiducial: Option<PathBuf>,
    #[command(flatten)]
    pub opt: OptimizerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the constructed state.
    #[arg(long)]
    pub state_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenuineArgs {
    #[command(flatten)]
    pub source: StateSource,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Correlation matrix entries as CSV.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Discord(a) => commands::discord(a, &argv),
        Command::Scatter(a) => commands::scatter(a, &argv),
        Command::Curve(a) => commands::curve(a, &argv),
        Command::Extend(a) => commands::extend(a, &argv),
        Command::Bound(a) => commands::bound(a, &argv),
        Command::Table1(a) => commands::table1(a, &argv),
        Command::Search(a) => commands::search(a, &argv),
        Command::Mdss(a) => commands::mdss(a, &argv),
        Command::Genuine(a) => commands::genuine(a, &argv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("classext: {e}");
            ExitCode::from(match e {
                CliError::Validation(_) => EXIT_VALIDATION,
                CliError::Io(_) => EXIT_IO,
            })
        }
    }
}
