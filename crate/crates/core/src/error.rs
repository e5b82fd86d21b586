use thiserror::Error;

/// Errors raised by the engine.
///
/// Infeasibility and unboundedness of an LP are not errors: they are
/// reported as [`crate::simplex::SolveStatus`] values.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed problem document: {0}")]
    Parse(String),

    #[error("dimension mismatch in `{field}`: {detail}")]
    Dimension { field: String, detail: String },

    #[error("unknown sense {token:?} at senses[{row}] (expected \"eq\" or \"le\")")]
    UnknownSense { row: usize, token: String },

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("problem must be in standard (equality) form")]
    NotStandardForm,

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("matrix is numerically defective (eigenvector condition {cond:e} > {threshold:e})")]
    Defective { cond: f64, threshold: f64 },

    #[error("QR iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("bordered matrix stayed defective after {retries} redraws")]
    TweakExhausted { retries: usize },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("lambda = {lambda} is a singular point of the basis")]
    SingularLambda { lambda: f64 },

    #[error("result is not optimal")]
    NotOptimal,

    #[error("problem at lambda = {lambda} is {status}")]
    BaseProblem { lambda: f64, status: crate::simplex::SolveStatus },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
