//! Argument parsing.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use purespin::lie::ModelKind;
use purespin::Tolerance;
use serde_json::Value;

use crate::{CliError, CliResult, CliffordOp, Command, DiracOp, RunConfig, Space, SpinorOp};

fn parse_group(s: &str) -> Result<ModelKind, String> {
    ModelKind::parse(s).map_err(|e| e.to_string())
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if t >= f64::EPSILON && t.is_finite() {
        Ok(t)
    } else {
        Err(format!("tolerance {t} is below machine epsilon"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "purespin", version, about = "Pure spinors, Dirac structures and q-Hamiltonian checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Group model: su2, so3, su3, coadjoint-su2, torus.
    #[arg(long, global = true, default_value = "su2", value_parser = parse_group)]
    pub group: ModelKind,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 10)]
    pub samples: usize,
    /// Numerical tolerance τ.
    #[arg(long = "tol", global = true, value_parser = parse_tolerance)]
    pub tolerance: Option<f64>,
    /// Finite-difference step.
    #[arg(long, global = true, value_parser = parse_tolerance)]
    pub fd_step: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Clifford algebra operations on exact rational input.
    Clifford {
        #[arg(value_enum)]
        op: CliffordArg,
        /// JSON input file, `-` for stdin.
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Pure spinor null spaces, constructions and pairings.
    Spinor {
        #[arg(value_enum)]
        op: SpinorArg,
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Images, preimages and the strong Dirac condition for a linear map.
    Dirac {
        #[arg(value_enum)]
        op: DiracArg,
        #[arg(long, default_value = "-")]
        input: String,
    },
    /// Volume densities at random points of the class with the given trace.
    ConjugacyVolume {
        #[arg(long, allow_negative_numbers = true)]
        class_trace: f64,
    },
    /// Twisted-differential residuals of φ and ψ and the Courant closure.
    Integrability {
        /// Number of sample points (overrides --samples).
        #[arg(long)]
        points: Option<usize>,
    },
    /// q-Hamiltonian checks.
    Qham {
        #[command(subcommand)]
        action: QhamAction,
    },
    /// The acceptance suite.
    VerifyAll,
}

#[derive(Debug, Subcommand)]
pub enum QhamAction {
    Verify {
        #[arg(long, value_enum)]
        space: SpaceArg,
        /// Report format; only json is produced.
        #[arg(long, default_value = "json", value_parser = ["json"])]
        report: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CliffordArg {
    Product,
    Transpose,
    Parity,
    GroupAction,
    PinNormalize,
    Reflections,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpinorArg {
    NullSpace,
    FromOrthogonal,
    Pairing,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DiracArg {
    Image,
    Preimage,
    Strong,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpaceArg {
    Class,
    Double,
    FusedDouble,
    Exp,
}

fn read_input(path: &str) -> CliResult<Value> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        std::fs::read_to_string(path)?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(e.to_string()))
}

impl Cli {
    pub fn into_config(self) -> CliResult<RunConfig> {
        let mut samples = self.common.samples;
        let command = match self.command {
            Sub::Clifford { op, input } => {
                let op = match op {
                    CliffordArg::Product => CliffordOp::Product,
                    CliffordArg::Transpose => CliffordOp::Transpose,
                    CliffordArg::Parity => CliffordOp::Parity,
                    CliffordArg::GroupAction => CliffordOp::GroupAction,
                    CliffordArg::PinNormalize => CliffordOp::PinNormalize,
                    CliffordArg::Reflections => CliffordOp::Reflections,
                };
                Command::Clifford { op, input: read_input(&input)? }
            }
            Sub::Spinor { op, input } => {
                let op = match op {
                    SpinorArg::NullSpace => SpinorOp::NullSpace,
                    SpinorArg::FromOrthogonal => SpinorOp::FromOrthogonal,
                    SpinorArg::Pairing => SpinorOp::Pairing,
                };
                Command::Spinor { op, input: read_input(&input)? }
            }
            Sub::Dirac { op, input } => {
                let op = match op {
                    DiracArg::Image => DiracOp::Image,
                    DiracArg::Preimage => DiracOp::Preimage,
                    DiracArg::Strong => DiracOp::Strong,
                };
                Command::Dirac { op, input: read_input(&input)? }
            }
            Sub::ConjugacyVolume { class_trace } => Command::ConjugacyVolume { class_trace },
            Sub::Integrability { points } => {
                samples = points.unwrap_or(samples);
                Command::Integrability
            }
            Sub::Qham { action: QhamAction::Verify { space, .. } } => Command::Qham {
                space: match space {
                    SpaceArg::Class => Space::Class,
                    SpaceArg::Double => Space::Double,
                    SpaceArg::FusedDouble => Space::FusedDouble,
                    SpaceArg::Exp => Space::Exp,
                },
            },
            Sub::VerifyAll => Command::VerifyAll,
        };
        let mut config = RunConfig::new(command, self.common.group);
        config.seed = self.common.seed;
        config.samples = samples;
        config.output = self.common.output;
        if let Some(t) = self.common.tolerance {
            config.tolerance = Tolerance::new(t);
        }
        if let Some(h) = self.common.fd_step {
            config.fd_step = h;
        }
        Ok(config)
    }
}
