use thiserror::Error;

/// Errors raised by grid construction, measure algebra, solvers and the experiment runner.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("measures live on different grids")]
    GridMismatch,

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),

    #[error("kernel radius {radius} is not resolvable at spacing {spacing}")]
    KernelUnresolvable { radius: f64, spacing: f64 },

    #[error("atom at node {node} is within {radius} of the boundary")]
    AtomNearBoundary { node: usize, radius: f64 },

    #[error("linear solver breakdown: {0}")]
    SolverBreakdown(String),

    #[error("truncation level {level} (n = {n}) did not converge; residual {residual:e}")]
    LevelFailed { level: usize, n: f64, residual: f64 },

    #[error("invalid compact set: {0}")]
    InvalidSet(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
