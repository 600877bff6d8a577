use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{function} is undefined at x = {arg}")]
    Domain { function: &'static str, arg: f64 },

    #[error("gamma = {0} is outside the admissible interval [1 + 1e-6, 2 - 1e-6]")]
    InvalidHurst(f64),

    #[error("coupling must be finite and strictly positive, got {0}")]
    InvalidCoupling(f64),

    #[error("Bloch vector {0:?} lies outside the unit ball")]
    InvalidState([f64; 3]),

    #[error("metric is singular: pure state with radial derivative {0}")]
    SingularMetric(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("objective is numerically flat (max {0:e} < 1e-300) on the scanned grid")]
    FlatObjective(f64),

    #[error("no interior threshold coupling: minimum at grid endpoint lambda = {lambda:e}")]
    NoThreshold { lambda: f64 },

    #[error("covariance factorization failed after jitter escalation to {jitter:e} (n = {size})")]
    Factorization { size: usize, jitter: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
