use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    #[error("unsupported geometry: {0}")]
    UnsupportedGeometry(String),
    #[error("quadrature tolerance {tol:e} not met after {panels} panels (error estimate {estimate:e})")]
    ToleranceNotMet { tol: f64, panels: usize, estimate: f64 },
    #[error("divergent integral: {0}")]
    DivergentIntegral(String),
    #[error("bracket failure: {0}")]
    BracketFailure(String),
    #[error("no convergence after {iterations} iterations: {detail}")]
    NoConvergence { iterations: usize, detail: String },
    #[error("scan failure: {0}")]
    ScanFailure(String),
    #[error("no solution found: {0}")]
    NoSolution(String),
    #[error("validation failure: {0}")]
    ValidationFailure(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
}

impl Error {
    /// True for errors caused by the caller's input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidParams(_) | Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
