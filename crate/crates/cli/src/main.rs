//! `qes`: build quasi-exactly solvable PT-symmetric potentials from a
//! generating function and verify every claim the construction makes.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 configuration error,
//! 3 numerical failure.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{merge, resolve, OutputFormat, RawOptions};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl CliError {
    pub fn config(msg: String) -> Self {
        CliError::Config(msg)
    }

    pub fn numerical(msg: String) -> Self {
        CliError::Numerical(msg)
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qes",
    version,
    about = "Quasi-exactly solvable PT-symmetric potentials with two known real eigenvalues"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output path (CSV for generate, JSON report otherwise; default stdout
    /// for reports).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// TOML config file; command-line flags take precedence over its keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Data format for generate: csv (with JSON sidecar) or json.
    #[arg(long, global = true)]
    format: Option<OutputFormat>,
}

#[derive(Debug, Args, Default)]
struct SelectionArgs {
    /// Worked family: oscillator or hyperbolic.
    #[arg(long)]
    family: Option<String>,

    /// Generating function W+(x), e.g. "2*x + i*x^2".
    #[arg(long)]
    wplus: Option<String>,

    /// Oscillator index m >= 0.
    #[arg(long)]
    m: Option<usize>,

    /// Oscillator slope a > 0 (m >= 1).
    #[arg(long)]
    a: Option<f64>,

    /// Oscillator imaginary amplitude b != 0 (m >= 1).
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,

    /// Shifted-oscillator alpha (m = 0) or hyperbolic frequency.
    #[arg(long)]
    alpha: Option<f64>,

    /// Shifted-oscillator imaginary displacement c (m = 0).
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,

    /// Hyperbolic amplitude A > 0.
    #[arg(long = "A")]
    big_a: Option<f64>,

    /// Hyperbolic constant imaginary part B (0 allowed).
    #[arg(long = "B", allow_negative_numbers = true)]
    big_b: Option<f64>,

    /// Factorization energy; free for type-1 zeros, forced for type-2.
    #[arg(long)]
    eps: Option<f64>,

    /// Location of the simple zero of Re W+ (expressions only).
    #[arg(long, allow_negative_numbers = true)]
    x0: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    xmin: Option<f64>,

    #[arg(long, allow_negative_numbers = true)]
    xmax: Option<f64>,

    /// Grid points (odd).
    #[arg(long)]
    n: Option<usize>,

    /// Eigenvalue tolerance for spectral checks.
    #[arg(long)]
    tol_eig: Option<f64>,

    /// Residual tolerance (Schroedinger defect, iteration residual).
    #[arg(long)]
    tol_res: Option<f64>,

    /// Relative tolerance for oracle-vs-pipeline comparisons.
    #[arg(long)]
    tol_oracle: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample V+, the two eigenstates, and both superpotentials to CSV/JSON.
    Generate(SelectionArgs),
    /// Run the construction-identity checks and emit a JSON report.
    Verify(SelectionArgs),
    /// Confirm spectral membership of the targets (default 0 and eps).
    Spectrum {
        #[command(flatten)]
        selection: SelectionArgs,
        /// Eigenvalue targets, comma separated (default "0,<eps>").
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        targets: Option<Vec<f64>>,
        /// Also estimate the discretization order on nested grids.
        #[arg(long)]
        order_check: bool,
    },
    /// Check the quartic-case operator identity on the polynomial module.
    Sl2 {
        #[arg(long)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        /// Monomial degree bound (>= 6).
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
}

fn collect_options(
    sel: &SelectionArgs,
    targets: Option<Vec<f64>>,
    cli: &Cli,
) -> Result<RawOptions, CliError> {
    let flags = RawOptions {
        family: sel.family.clone(),
        wplus: sel.wplus.clone(),
        m: sel.m,
        a: sel.a,
        b: sel.b,
        alpha: sel.alpha,
        c: sel.c,
        big_a: sel.big_a,
        big_b: sel.big_b,
        eps: sel.eps,
        x0: sel.x0,
        xmin: sel.xmin,
        xmax: sel.xmax,
        n: sel.n,
        tol_eig: sel.tol_eig,
        tol_res: sel.tol_res,
        tol_oracle: sel.tol_oracle,
        targets,
        format: cli.format,
        out: cli.out.clone(),
    };
    let file = match &cli.config {
        Some(path) => config::load_file(path)?,
        None => Default::default(),
    };
    merge(flags, file)
}

const GENERATE_DEFAULT_N: usize = 2001;
const VERIFY_DEFAULT_N: usize = 4001;
const SPECTRUM_DEFAULT_N: usize = 4801;

fn run() -> Result<i32, CliError> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Generate(sel) => {
            let opts = collect_options(sel, None, &cli)?;
            let run = resolve(&opts, GENERATE_DEFAULT_N)?;
            commands::cmd_generate(&run)
        }
        Command::Verify(sel) => {
            let opts = collect_options(sel, None, &cli)?;
            let run = resolve(&opts, VERIFY_DEFAULT_N)?;
            commands::cmd_verify(&run)
        }
        Command::Spectrum {
            selection,
            targets,
            order_check,
        } => {
            let opts = collect_options(selection, targets.clone(), &cli)?;
            let run = resolve(&opts, SPECTRUM_DEFAULT_N)?;
            commands::cmd_spectrum(&run, *order_check)
        }
        Command::Sl2 { a, b, degree } => commands::cmd_sl2(*a, *b, *degree, cli.out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
