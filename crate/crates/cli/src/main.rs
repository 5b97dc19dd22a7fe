//! `disjunct`: construct group testing matrices, measure their spectra and
//! disjunctness, and evaluate the false-positive bounds.
//!
//! Exit codes: 0 on success, 1 when `verify` finds a failing check, 2 on any
//! input error (bad flags, unreadable or malformed files, exceeded budgets).

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use disjunct::Budgets;

#[derive(Parser, Debug)]
#[command(name = "disjunct", version, about = "Almost-disjunct group testing matrices from codes and designs")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Report format. JSON is canonical; CSV and text are projections.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for parallel kernels; results do not depend on it.
    #[arg(long, global = true, env = "DISJUNCT_WORKERS")]
    pub workers: Option<usize>,
    /// Maximum size of an enumerated q-ary code.
    #[arg(long, global = true, env = "DISJUNCT_CODE_BUDGET")]
    pub code_budget: Option<u64>,
    /// Maximum number of candidate supports in a fixed-weight subcode search.
    #[arg(long, global = true, env = "DISJUNCT_SUBCODE_BUDGET")]
    pub subcode_budget: Option<u64>,
    /// Maximum code size for exact spectra.
    #[arg(long, global = true, env = "DISJUNCT_SPECTRUM_BUDGET")]
    pub spectrum_budget: Option<u64>,
    /// Maximum work for exhaustive disjunctness and exact P_A.
    #[arg(long, global = true, env = "DISJUNCT_ENUM_BUDGET")]
    pub enum_budget: Option<u64>,
}

impl Global {
    pub fn budgets(&self) -> Budgets {
        let d = Budgets::default();
        Budgets {
            code_size: self.code_budget.unwrap_or(d.code_size),
            subcode: self.subcode_budget.unwrap_or(d.subcode),
            spectrum_size: self.spectrum_budget.unwrap_or(d.spectrum_size),
            disjunct_ops: self.enum_budget.unwrap_or(d.disjunct_ops),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a test matrix and write it in matrix-file form.
    Construct(ConstructArgs),
    /// Distance distribution, dual spectrum and moment identities.
    Spectra(SpectraArgs),
    /// Evaluate ε bounds.
    Bound(BoundArgs),
    /// Measure P_A exactly or by Monte Carlo with COMP decoding.
    Simulate(SimulateArgs),
    /// Run the built-in invariant suite.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstructFamily {
    /// Kautz-Singleton image of a Reed-Solomon code over GF(q).
    KsRs,
    /// Fixed-weight subcode of a binary BCH code of length 2^m - 1.
    BchCw,
    /// Block design read from a file.
    Design,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub family: ConstructFamily,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub delta: Option<usize>,
    #[arg(long)]
    pub w: Option<usize>,
    /// Block file for `--family design`.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Where to write the matrix file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the q-ary source code (`ks-rs` only).
    #[arg(long)]
    pub code_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpectraArgs {
    /// Matrix file (Johnson scheme).
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// q-ary code file (Hamming scheme).
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Largest moment order in the identity table.
    #[arg(long, default_value_t = 8)]
    pub rmax: u32,
    /// Estimate from this many random ordered pairs instead of all of them.
    #[arg(long)]
    pub sample: Option<u64>,
    #[arg(long, default_value_t = disjunct::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Families to evaluate, comma separated, or `all`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub family: Vec<String>,
    #[arg(long)]
    pub q: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Number of rows of the constant-weight matrix.
    #[arg(long = "M")]
    pub mlen: Option<u64>,
    #[arg(long)]
    pub w: Option<u64>,
    #[arg(long)]
    pub t: u64,
    /// Even moment order, or `auto` to pick the best even value below d'.
    #[arg(long)]
    pub ell: Option<String>,
    /// Dual distance; measured from `--matrix`/`--code` when omitted.
    #[arg(long)]
    pub dprime: Option<u64>,
    /// Matrix file supplying `M`, `w` and the Johnson-scheme dual distance.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
    /// Code file supplying `q`, `n` and the Hamming-scheme dual distance.
    #[arg(long)]
    pub code: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interval {
    Wilson,
    ClopperPearson,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    /// q-ary source code, enabling the nonbinary bound in the table.
    #[arg(long)]
    pub code: Option<PathBuf>,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = disjunct::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.99)]
    pub confidence: f64,
    #[arg(long, value_enum, default_value_t = Interval::Wilson)]
    pub interval: Interval,
    /// Enumerate all (I, j) pairs when the enumeration budget allows.
    #[arg(long)]
    pub exact: bool,
    /// Write one CSV row per Monte Carlo trial to this file.
    #[arg(long)]
    pub trials_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Restrict to these groups (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Also check this matrix file.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

/// Failure classes mapped onto exit codes.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Failed(String),
}

impl<E: std::fmt::Display> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let global = cli.global.clone();
    let result = disjunct::with_workers(global.workers, || commands::run(&cli.command, &global));
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Failed(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
