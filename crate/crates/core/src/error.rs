use thiserror::Error;

/// Errors raised by graph construction and the numerical pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is disconnected: vertex `{0}` is unreachable")]
    Disconnected(String),

    #[error("trivial graph: cycle rank {0} < 2")]
    TrivialGraph(i64),

    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),

    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),

    #[error("graph has no edges")]
    Empty,

    #[error("adjacency matrix is reducible")]
    Reducible,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix entries must be finite and nonnegative")]
    InvalidMatrix,

    #[error("eigen-solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("invalid edge weighting: {0}")]
    InvalidWeighting(String),

    #[error("infeasible point {point:?}: {reason}")]
    Infeasible { point: Vec<f64>, reason: String },

    #[error("direction is not tangent: mean {mean:e} exceeds tolerance {tolerance:e}")]
    NotTangent { mean: f64, tolerance: f64 },

    #[error("pressure drift {drift:e} along a surface path (tolerance {tolerance:e})")]
    PressureDrift { drift: f64, tolerance: f64 },

    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("index {index} out of range for {len} states")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("finite-difference stencil leaves the domain at {0:?}")]
    OutOfDomain(Vec<f64>),

    #[error("metric is degenerate: EG - F^2 = {0:e}")]
    DegenerateMetric(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
