use thiserror::Error;

/// Everything that can go wrong between reading a mesh and solving the plate system.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invalid mesh: {0}")]
    Mesh(String),

    #[error("cell {cell} is degenerate: {reason}")]
    DegenerateCell { cell: usize, reason: String },

    #[error("elliptic projector is singular on cell {cell}")]
    SingularProjector { cell: usize },

    #[error("matrix is not symmetric positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("factorization breakdown: {0}")]
    SolverBreakdown(String),

    #[error("reference seminorm vanishes (exact field projects to piecewise linears)")]
    ZeroReference,

    #[error("mesh file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
