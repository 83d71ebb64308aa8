mod commands;
mod experiment;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use waring_core::{GaussRational, ParseError, Scalar, WaringError, C64};

use crate::render::Render;

/// Waring rank and minimal power-sum decompositions of binary forms.
#[derive(Debug, Parser)]
#[command(name = "waring", version)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Arithmetic: exact Gaussian rationals or complex floats.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Relative residual accepted when verifying a decomposition.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FormInput {
    /// Form such as "3x^2y - y^3".
    pub form: Option<String>,
    /// Read forms from a file, one per line; `#` starts a comment.
    #[arg(long, conflicts_with = "form")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// F-ranks, Waring rank and the certificate behind it.
    Rank(FormInput),
    /// Minimal decompositions, each verified before it is printed.
    Decompose {
        #[command(flatten)]
        input: FormInput,
        /// Number of distinct decompositions to look for.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Check a decomposition against a form.
    Verify {
        form: String,
        /// Decomposition such as "(x + y)^3 + 2*(x - y)^3".
        decomposition: String,
    },
    /// Apply a differential operator in dx, dy to a form.
    Apolar { form: String, operator: String },
    /// Rank from catalecticant kernels, compared with the Hankel rank.
    Oracle(FormInput),
    /// Rank statistics over seeded random integer forms, as CSV.
    Experiment(experiment::ExperimentArgs),
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(ParseError),
    ZeroForm,
    Numeric(WaringError),
    Verification(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::ZeroForm => 3,
            CliError::Numeric(_) => 4,
            CliError::Verification(_) => 5,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Parse(e) => write!(f, "parse error: {e}"),
            CliError::ZeroForm => write!(f, "the zero form has no Waring rank"),
            CliError::Numeric(e) => write!(f, "numeric failure: {e}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<WaringError> for CliError {
    fn from(e: WaringError) -> Self {
        match e {
            WaringError::ZeroForm => CliError::ZeroForm,
            WaringError::Parse(p) => CliError::Parse(p),
            WaringError::DegreeMismatch { .. } | WaringError::LengthMismatch { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numeric(other),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn dispatch<S: Render>(command: &Command, cfg: &ConfigArgs) -> CliResult<String> {
    match command {
        Command::Rank(input) => commands::rank::<S>(input, cfg),
        Command::Decompose { input, count } => commands::decompose::<S>(input, *count, cfg),
        Command::Verify { form, decomposition } => commands::verify::<S>(form, decomposition, cfg),
        Command::Apolar { form, operator } => commands::apolar::<S>(form, operator, cfg),
        Command::Oracle(input) => commands::oracle::<S>(input, cfg),
        Command::Experiment(args) => experiment::run::<S>(args, cfg),
    }
}

fn run(cli: &Cli) -> CliResult<String> {
    if !(cli.config.tol > 0.0 && cli.config.tol.is_finite()) {
        return Err(CliError::Usage("--tol must be a positive number".into()));
    }
    match cli.config.mode {
        Mode::Exact => dispatch::<GaussRational>(&cli.command, &cli.config),
        Mode::Float => dispatch::<C64>(&cli.command, &cli.config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Settings for the core library under the run configuration.
pub fn settings(cfg: &ConfigArgs) -> waring_core::Settings {
    waring_core::Settings {
        verify_tol: cfg.tol,
        ..waring_core::Settings::with_seed(cfg.seed)
    }
}

/// Parses a form, rejecting zero with its own error.
pub fn parse_input<S: Scalar>(text: &str) -> CliResult<waring_core::BinaryForm<S>> {
    let f = waring_core::parse_form::<S>(text, None)?;
    if f.is_zero() {
        return Err(CliError::ZeroForm);
    }
    Ok(f)
}
