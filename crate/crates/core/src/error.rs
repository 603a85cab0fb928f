use thiserror::Error;

/// Errors raised by the geometry kernel, the identity lab and the solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation error: {message} (best lower bound {best_lower_bound})")]
    Evaluation { message: String, best_lower_bound: f64 },
    #[error("norm is not admissible: {0}")]
    NonAdmissibleNorm(String),
    #[error("mesh quality error at node {node}: shape-operator asymmetry {asymmetry:.3e}")]
    MeshQuality { node: usize, asymmetry: f64 },
    #[error("curvature error: {0}")]
    Curvature(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("assembly error: {0}")]
    Assembly(String),
    #[error("non-finite value at node {node}")]
    Propagation { node: usize },
    #[error("solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("convexity lost: {0}")]
    Convexity(String),
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
