use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("regime error: {0}")]
    Regime(String),
    #[error("singular parameters: {0}")]
    SingularParameter(String),
    #[error("need at least {needed} sites, got {got}")]
    Size { needed: usize, got: usize },
    #[error("integration unstable: {0}")]
    Instability(String),
    #[error("angle map is singular at |sin phi| = 1 (site {0})")]
    Gimbal(usize),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("continuation unstable: zeta'(0) variants {a} and {b} differ by {diff:e}")]
    ContinuationUnstable { a: f64, b: f64, diff: f64 },
    #[error("branch point or singularity: {0}")]
    Singularity(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Regime,
    Numerical,
    Io,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Regime(_) | Error::SingularParameter(_) => ErrorClass::Regime,
            Error::Instability(_)
            | Error::GridTooCoarse(_)
            | Error::Convergence(_)
            | Error::ContinuationUnstable { .. }
            | Error::Singularity(_) => ErrorClass::Numerical,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) => ErrorClass::Io,
            Error::Domain(_)
            | Error::Size { .. }
            | Error::Gimbal(_)
            | Error::GridMismatch(_)
            | Error::Config(_) => ErrorClass::Input,
        }
    }
}
