use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not orthogonal (defect {defect:.3e})")]
    NotOrthogonal { defect: f64 },
    #[error("bilinear form is degenerate")]
    Degenerate,
    #[error("element is not invertible in the Clifford algebra")]
    NotInvertible,
    #[error("element is not in the Clifford group: {0}")]
    NotInCliffordGroup(String),
    #[error("no non-isotropic reflection vector found")]
    ReflectionFailure,
    #[error("bases are not dual-normalized (defect {defect:.3e})")]
    NotDualBases { defect: f64 },
    #[error("zero spinor has no null space")]
    ZeroSpinor,
    #[error("subspace is not Lagrangian")]
    NotLagrangian,
    #[error("map is not a Dirac map for the given structures (distance {distance:.3e})")]
    NotDiracMap { distance: f64 },
    #[error("strong Dirac condition violated")]
    NotStrong,
    #[error("point lies outside the domain where exp is a local diffeomorphism")]
    OutsideExpDomain,
    #[error("finite-difference step {0} is too small")]
    StepUnderflow(f64),
    #[error("tangent frame does not span")]
    DegenerateFrame,
    #[error("group model {0} does not admit a Pin lift of Ad")]
    NotLiftable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
