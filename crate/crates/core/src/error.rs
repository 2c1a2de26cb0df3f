use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: |m[{row}][{col}] - conj(m[{col}][{row}])| = {defect:e}")]
    NonHermitianInput { row: usize, col: usize, defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation requires a lattice-backed operator")]
    MatrixBackingUnsupported,

    #[error("unsupported backing: {0}")]
    UnsupportedBacking(String),

    #[error("loop endpoints differ: {0}")]
    LoopMismatch(String),

    #[error("family is discontinuous: curve {curve} jumps by {jump:e} at grid index {index}")]
    DiscontinuousCurve { curve: usize, index: usize, jump: f64 },

    #[error("no admissible weight on [{a}, {b}] near {hint}")]
    NoGapFound { a: f64, b: f64, hint: f64 },

    #[error("spectrum at tau = {tau} has an eigenvalue within {tol:e} of zero")]
    EndpointNotInvertible { tau: f64, tol: f64 },

    #[error("partition depth exceeded ({0} bisections)")]
    PartitionDepthExceeded(u32),

    #[error("curve {curve} touches zero without changing sign near tau = {tau}")]
    TangencyDetected { curve: usize, tau: f64 },

    #[error("operation requires a curve-backed family")]
    CurvesRequired,

    #[error("loop family has no invertible parameter value")]
    NowhereInvertible,

    #[error("Hurwitz zeta evaluated at its pole s = 1")]
    PoleAtOne,

    #[error("model cannot be regularized: {0}")]
    UnregularizableModel(String),

    #[error("identity check failed: {0}")]
    IdentityViolated(String),

    #[error("parity condition violated: order {order} + dimension {dimension} is even")]
    ParityViolated { order: u32, dimension: u32 },

    #[error("value {0} is not a dyadic rational with denominator at most 2^20")]
    NotDyadic(f64),

    #[error("leading coefficient of the symbol must be a positive constant")]
    NonConstantLeadingCoefficient,

    #[error("lambda integral diverges: pole power {0} in the integrand")]
    DivergentLambdaIntegral(u32),

    #[error("leading symbol {0} is not positive on the cosphere")]
    NonPositiveLeadingSymbol(f64),

    #[error("mode window too small: mode {label} has {constraints} active boundary constraints")]
    TailViolation { label: i64, constraints: u8 },

    #[error("problem is not compatible with the covering: {0}")]
    NotCoverCompatible(String),
}

impl Error {
    /// Stable variant name, echoed by the command-line driver.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonHermitianInput { .. } => "NonHermitianInput",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::MatrixBackingUnsupported => "MatrixBackingUnsupported",
            Error::UnsupportedBacking(_) => "UnsupportedBacking",
            Error::LoopMismatch(_) => "LoopMismatch",
            Error::DiscontinuousCurve { .. } => "DiscontinuousCurve",
            Error::NoGapFound { .. } => "NoGapFound",
            Error::EndpointNotInvertible { .. } => "EndpointNotInvertible",
            Error::PartitionDepthExceeded(_) => "PartitionDepthExceeded",
            Error::TangencyDetected { .. } => "TangencyDetected",
            Error::CurvesRequired => "CurvesRequired",
            Error::NowhereInvertible => "NowhereInvertible",
            Error::PoleAtOne => "PoleAtOne",
            Error::UnregularizableModel(_) => "UnregularizableModel",
            Error::IdentityViolated(_) => "IdentityViolated",
            Error::ParityViolated { .. } => "ParityViolated",
            Error::NotDyadic(_) => "NotDyadic",
            Error::NonConstantLeadingCoefficient => "NonConstantLeadingCoefficient",
            Error::DivergentLambdaIntegral(_) => "DivergentLambdaIntegral",
            Error::NonPositiveLeadingSymbol(_) => "NonPositiveLeadingSymbol",
            Error::TailViolation { .. } => "TailViolation",
            Error::NotCoverCompatible(_) => "NotCoverCompatible",
        }
    }
}
