use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("root list is empty")]
    EmptyRoots,

    #[error("root count {found} does not match declared degree {expected}")]
    RootCountMismatch { expected: usize, found: usize },

    #[error("jet orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("degree {degree} exceeds the limit {limit}")]
    DegreeGuard { degree: u64, limit: u64 },

    #[error("coefficient overflow while expanding degree {degree}")]
    CoefficientOverflow { degree: u64 },

    #[error("orthogonalization lost rank at degree {degree}")]
    RankDeficient { degree: usize },

    #[error("evaluation point coincides with support point {index}; the potential is -inf")]
    LogPole { index: usize },

    #[error("probe at radius {radius} does not escape; it lies in the compact set")]
    ProbeInsideCompact { radius: f64 },

    #[error("derivative vanishes at probe {probe} on radius {radius}")]
    RadiusTooSmall { radius: f64, probe: usize },

    #[error("inverse branch solve failed for sample {sample} at step {step}")]
    InverseBranch { sample: usize, step: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
