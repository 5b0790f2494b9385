use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("truncation leak {leak:.3e} exceeds tolerance {tol:.3e} at dim {dim}; increase the Fock cutoff")]
    TruncationLeak { leak: f64, tol: f64, dim: usize },

    #[error("cat state normalization vanishes (alpha = 0 with phase pi)")]
    DegenerateCat,

    #[error(
        "pre- and post-selected states are orthogonal (overlap {overlap:.3e}); weak and modular values are undefined"
    )]
    OrthogonalSelection { overlap: f64 },

    #[error("projector level m = {m} must be below the truncation dimension {dim}")]
    LevelOutOfRange { m: usize, dim: usize },

    #[error("post-selection failed: success probability {ps:.3e} is below the floor {floor:.3e}")]
    PostSelectionFailed { ps: f64, floor: f64 },

    #[error("post-selected pointer has zero norm")]
    DegeneratePostSelection,

    #[error("exact evolution disagrees with the matrix exponential by {deviation:.3e}")]
    EvolutionMismatch { deviation: f64 },

    #[error("mandel Q is undefined for a state with zero mean photon number")]
    UndefinedMandelQ,

    #[error("quadrature variance {variance:.3e} is not positive; the truncation is too small")]
    NonPositiveVariance { variance: f64 },

    #[error("unknown figure `{0}`")]
    UnknownFigure(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("csv output failed: {0}")]
    Csv(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Csv(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Csv(e.to_string())
    }
}
