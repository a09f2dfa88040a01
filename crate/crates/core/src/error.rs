use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid manifold: {0}")]
    InvalidManifold(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("eigenvalue bracket failure: {0}; inspect the mesh and the problem definition")]
    Bracket(String),

    #[error("step size underflow at r = {r:e} (h = {step:e}); the radial ODE is too stiff here")]
    StepSize { r: f64, step: f64 },

    #[error("degenerate test function: denominator {0:e}")]
    DegenerateTestFunction(f64),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("containment violated: {0}")]
    Containment(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) => 2,
            Error::Numerical(_) | Error::Bracket(_) | Error::StepSize { .. } => 3,
            Error::Io(_) => 2,
            _ => 1,
        }
    }
}
