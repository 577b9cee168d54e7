//! The `divlog` command line: argument parsing, dispatch and exit codes.
//!
//! [`run_command`] is the whole program minus process I/O, so tests drive it
//! in-process.

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use divlog_core::Error;

pub mod commands;
pub mod config;
pub mod demos;
pub mod report;

pub use config::{Config, Format};
pub use report::{Report, Status};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unknown names, unreadable files.
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Unknown { .. }) => EXIT_USAGE,
            CliError::Core(Error::Limit(_)) => Status::Inconclusive.exit_code(),
            CliError::Core(_) => EXIT_DATA,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "divlog", version, about = "Divergences on monads: evaluators, axiom checkers and a relational logic")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Largest carrier enumerated by the checkers.
    #[arg(long, global = true, default_value_t = 3)]
    pub max_carrier: usize,
    /// Denominator of the probability grid.
    #[arg(long, global = true, default_value_t = 4)]
    pub grid_denom: u32,
    /// Largest cost enumerated for cost monads.
    #[arg(long, global = true, default_value_t = 3)]
    pub cost_bound: u32,
    /// Term depth bound.
    #[arg(long, global = true, default_value_t = 3)]
    pub depth: usize,
    /// Rényi orders for zCDP/tCDP: `start:stop:step` or `a,b,…`.
    #[arg(long, global = true, value_parser = config::parse_alpha_grid)]
    pub alpha_grid: Option<config::AlphaGrid>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Overridden by `DIVLOG_SEED`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a divergence on two computations.
    Eval(commands::EvalArgs),
    /// Check monotonicity, reflexivity and composability.
    Axioms(commands::AxiomArgs),
    /// Relational liftings.
    Lift {
        #[command(subcommand)]
        cmd: commands::LiftCmd,
    },
    /// Interpret a program.
    Run {
        file: PathBuf,
        /// `name:type=value`, repeatable.
        #[arg(long = "env")]
        env: Vec<String>,
        /// Term to run instead of the program's `main`.
        #[arg(long)]
        term: Option<String>,
    },
    /// Check a scenario's judgment semantically.
    Judge {
        scenario: PathBuf,
        #[arg(long, default_value_t = divlog_core::acrl::DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Check a derivation script step by step.
    Derive {
        script: PathBuf,
        /// Also check the goal semantically.
        #[arg(long)]
        confirm: bool,
    },
    /// Term metrics and the generated divergence.
    Qet {
        #[command(subcommand)]
        cmd: commands::QetCmd,
    },
    /// Bundled demonstrations.
    Demo { name: demos::Demo },
}

/// What a finished invocation prints and returns.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// Runs `argv` (program name first), taking the seed override from the
/// `DIVLOG_SEED` environment variable.
pub fn run_command<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    run_with_seed(argv, std::env::var("DIVLOG_SEED").ok().as_deref())
}

/// [`run_command`] with an explicit seed override.
pub fn run_with_seed<I, T>(argv: I, seed_override: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome { code: 0, stdout: text, stderr: String::new(), report: None },
                _ => Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: text, report: None },
            };
        }
    };
    let fail = |e: CliError| Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("divlog: {e}\n"), report: None };
    let cfg = match config_of(&cli.global, seed_override) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    if let Some(j) = cli.global.jobs {
        // Only the first pool wins; later calls in the same process keep it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let start = Instant::now();
    let mut report = Report::new(argv.iter().skip(1).cloned().collect(), cfg.clone());
    if let Err(e) = commands::dispatch(&cli.command, &cfg, &mut report) {
        return fail(e);
    }
    let elapsed = start.elapsed();
    let (stdout, stderr) = match cfg.format {
        Format::Json => (report.json(), String::new()),
        Format::Text => (report.text(), format!("elapsed: {:.3}s\n", elapsed.as_secs_f64())),
    };
    Outcome { code: report.status.exit_code(), stdout, stderr, report: Some(report) }
}

fn config_of(g: &GlobalArgs, seed_override: Option<&str>) -> CliResult<Config> {
    let seed = match seed_override {
        Some(s) => s.trim().parse().map_err(|_| CliError::Usage(format!("DIVLOG_SEED must be an unsigned integer, got `{s}`")))?,
        None => g.seed,
    };
    let cfg = Config {
        max_carrier: g.max_carrier,
        grid_denom: g.grid_denom,
        cost_bound: g.cost_bound,
        depth: g.depth,
        alpha_grid: g.alpha_grid.clone().map(|g| g.0),
        tol: g.tol,
        seed,
        format: g.format,
    };
    cfg.validate()?;
    Ok(cfg)
}
