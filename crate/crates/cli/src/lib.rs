//! Command-line front end: argument parsing, JSON input, seeded runs and report emission.

mod algebra;
pub mod args;
mod geometry;
pub mod report;

use std::path::PathBuf;

use purespin::lie::{GroupModel, ModelKind};
use purespin::Tolerance;
use serde_json::Value;

pub use args::Cli;
pub use report::Report;

/// Environment variable read for the worker thread count.
pub const THREADS_VAR: &str = "PURESPIN_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliffordOp {
    Product,
    Transpose,
    Parity,
    GroupAction,
    PinNormalize,
    Reflections,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinorOp {
    NullSpace,
    FromOrthogonal,
    Pairing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiracOp {
    Image,
    Preimage,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Class,
    Double,
    FusedDouble,
    Exp,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Clifford { op: CliffordOp, input: Value },
    Spinor { op: SpinorOp, input: Value },
    Dirac { op: DiracOp, input: Value },
    ConjugacyVolume { class_trace: f64 },
    Integrability,
    Qham { space: Space },
    VerifyAll,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Clifford { op, .. } => format!("clifford {}", algebra::clifford_op_name(*op)),
            Command::Spinor { op, .. } => format!("spinor {}", algebra::spinor_op_name(*op)),
            Command::Dirac { op, .. } => format!("dirac {}", algebra::dirac_op_name(*op)),
            Command::ConjugacyVolume { .. } => "conjugacy-volume".into(),
            Command::Integrability => "integrability".into(),
            Command::Qham { space } => format!("qham verify {}", geometry::space_name(*space)),
            Command::VerifyAll => "verify-all".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub group: ModelKind,
    pub tolerance: Tolerance,
    pub fd_step: f64,
    pub samples: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, group: ModelKind) -> Self {
        RunConfig {
            command,
            group,
            tolerance: Tolerance::default(),
            fd_step: purespin::lie::forms::FD_STEP,
            samples: 10,
            seed: 7,
            output: None,
        }
    }

    pub fn model(&self) -> GroupModel {
        GroupModel::new(self.group)
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Compute(purespin::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => write!(f, "usage error: {s}"),
            CliError::Input(s) => write!(f, "malformed input: {s}"),
            CliError::Compute(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<purespin::Error> for CliError {
    fn from(e: purespin::Error) -> Self {
        CliError::Compute(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Compute(_) | CliError::Io(_) => 4,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn run(config: &RunConfig) -> CliResult<Report> {
    if config.fd_step <= f64::EPSILON {
        return Err(CliError::Usage(format!("step {} is below machine epsilon", config.fd_step)));
    }
    let mut report = Report::new(config);
    match &config.command {
        Command::Clifford { op, input } => algebra::clifford(*op, input, config, &mut report)?,
        Command::Spinor { op, input } => algebra::spinor(*op, input, config, &mut report)?,
        Command::Dirac { op, input } => algebra::dirac(*op, input, config, &mut report)?,
        Command::ConjugacyVolume { class_trace } => geometry::conjugacy_volume(*class_trace, config, &mut report)?,
        Command::Integrability => geometry::integrability(config, &mut report)?,
        Command::Qham { space } => geometry::qham(*space, config, &mut report)?,
        Command::VerifyAll => geometry::verify_all(config, &mut report)?,
    }
    Ok(report)
}

/// Worker count from [`THREADS_VAR`], defaulting to one.
pub fn thread_count() -> usize {
    std::env::var(THREADS_VAR).ok().and_then(|s| s.parse().ok()).filter(|&n| n > 0).unwrap_or(1)
}

/// Maps `f` over `items` on [`thread_count`] workers; results keep the input order.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = thread_count().min(items.len().max(1));
    if threads <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}
