//! Command-line front end for `fibtree`.

pub mod commands;
pub mod document;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use fibtree::entropy::DEFAULT_MAX_SUBSYSTEMS;
use fibtree::lattice::RootType;
use fibtree::CnnTemplate;

pub use document::SpecDocument;
pub use error::CliError;
pub use report::{Format, RunReport};

use commands::{Outcome, PhaseArgs, Units};

pub const MAX_SUBSYSTEMS_ENV: &str = "FIBTREE_MAX_SUBSYSTEMS";

#[derive(Debug, Parser)]
#[command(name = "fibtree", version, about = "Block counts and entropy of tree shifts on the Fibonacci lattice")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Show entropies in bits instead of nats.
    #[arg(long, global = true)]
    pub log2: bool,
    /// Omit the wall-time footer.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RootArg {
    Eps,
    Two,
}

impl From<RootArg> for RootType {
    fn from(r: RootArg) -> Self {
        match r {
            RootArg::Eps => RootType::Epsilon,
            RootArg::Two => RootType::TwoRooted,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact block counts per root symbol and height.
    Count {
        spec_file: PathBuf,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, value_enum, default_value = "eps")]
        root: RootArg,
    },
    /// Topological entropy via simple subsystems.
    Entropy {
        spec_file: PathBuf,
        /// List every simple subsystem with its spectral radius.
        #[arg(long)]
        list_subsystems: bool,
    },
    /// Check the block-count recursion against brute-force oracles.
    Verify {
        spec_file: PathBuf,
        #[arg(long, default_value_t = 4)]
        naive_depth: usize,
        #[arg(long, default_value_t = 8)]
        dp_depth: usize,
    },
    /// Pattern set, region and entropy of one network template.
    #[command(allow_negative_numbers = true)]
    CnnClassify {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        z: f64,
    },
    /// Sweep the (a, z) plane and write a CSV of regions and entropies.
    #[command(allow_negative_numbers = true)]
    PhaseDiagram {
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        a_min: f64,
        #[arg(long)]
        a_max: f64,
        #[arg(long)]
        z_min: f64,
        #[arg(long)]
        z_max: f64,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// What a run printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn read_document(path: &std::path::Path) -> Result<SpecDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    SpecDocument::parse(&text)
}

fn max_subsystems(value: Option<&str>) -> Result<u128, CliError> {
    match value {
        None => Ok(DEFAULT_MAX_SUBSYSTEMS),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("{MAX_SUBSYSTEMS_ENV}={v:?} is not a nonnegative integer"))),
    }
}

fn dispatch(cli: &Cli, echo: &str, cap_env: Option<&str>) -> Result<Outcome, CliError> {
    let units = Units { log2: cli.log2 };
    match &cli.command {
        Command::Count { spec_file, depth, root } => {
            commands::count(echo, &read_document(spec_file)?, *depth, (*root).into(), units)
        }
        Command::Entropy {
            spec_file,
            list_subsystems,
        } => commands::entropy(
            echo,
            &read_document(spec_file)?,
            *list_subsystems,
            max_subsystems(cap_env)?,
            units,
        ),
        Command::Verify {
            spec_file,
            naive_depth,
            dp_depth,
        } => commands::verify(echo, &read_document(spec_file)?, *naive_depth, *dp_depth, None),
        Command::CnnClassify { a, a1, a2, z } => commands::cnn_classify(echo, CnnTemplate::new(*a, *a1, *a2, *z), units),
        Command::PhaseDiagram {
            a1,
            a2,
            a_min,
            a_max,
            z_min,
            z_max,
            step,
            out,
        } => commands::phase_diagram(
            echo,
            &PhaseArgs {
                a1: *a1,
                a2: *a2,
                a_range: (*a_min, *a_max),
                z_range: (*z_min, *z_max),
                step: *step,
                out,
            },
            units,
        ),
    }
}

/// Parses `args` (program name first) and runs the command. The subsystem
/// cap is read from `cap_env` when given.
pub fn run_with<I, T>(args: I, cap_env: Option<&str>) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let start = Instant::now();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if e.use_stderr() {
                RunOutput { stdout: String::new(), stderr: text, code }
            } else {
                RunOutput { stdout: text, stderr: String::new(), code }
            };
        }
    };
    let echo = std::iter::once("fibtree".to_string())
        .chain(args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()))
        .collect::<Vec<_>>()
        .join(" ");
    match dispatch(&cli, &echo, cap_env) {
        Ok(outcome) => {
            let wall = (!cli.no_timing).then(|| start.elapsed());
            RunOutput {
                stdout: outcome.report.render(cli.format, wall),
                stderr: String::new(),
                code: outcome.code,
            }
        }
        Err(e) => RunOutput {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: e.exit_code(),
        },
    }
}

/// [`run_with`] reading the subsystem cap from the environment.
pub fn run<I, T>(args: I) -> RunOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cap = std::env::var(MAX_SUBSYSTEMS_ENV).ok();
    run_with(args, cap.as_deref())
}
