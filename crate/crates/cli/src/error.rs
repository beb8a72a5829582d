use thiserror::Error;

/// Failure of a CLI run, grouped into the categories that select the exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("io error: {0}")]
    Io(String),

    /// Artifacts were written but a check on their content failed.
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Mesh(_) => "mesh",
            CliError::Assembly(_) => "assembly",
            CliError::Solver(_) => "solver",
            CliError::Io(_) => "io",
            CliError::Validation(_) => "validation",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Mesh(_) => 3,
            CliError::Assembly(_) => 4,
            CliError::Solver(_) => 5,
            CliError::Io(_) => 6,
            CliError::Validation(_) => 7,
        }
    }
}

impl From<ncvem::Error> for CliError {
    fn from(e: ncvem::Error) -> Self {
        use ncvem::Error as E;
        let msg = e.to_string();
        match e {
            E::Config(_) => CliError::Config(msg),
            E::Mesh(_) | E::DegenerateCell { .. } | E::Format(_) => CliError::Mesh(msg),
            E::SingularProjector { .. } => CliError::Assembly(msg),
            E::NotPositiveDefinite(_) | E::SolverBreakdown(_) | E::ZeroReference => CliError::Solver(msg),
            E::Io(_) => CliError::Io(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
