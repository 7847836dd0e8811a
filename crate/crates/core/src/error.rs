use thiserror::Error;

/// Errors raised by curve construction, geometry, flows and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),

    #[error("grid of {grid} samples cannot resolve order {order} (need at least {required})")]
    GridTooCoarse {
        grid: usize,
        order: usize,
        required: usize,
    },

    #[error("curve is not strictly convex: radius of curvature {margin:.3e} at theta = {theta:.6}")]
    NotConvex { margin: f64, theta: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("flow failed: {0}")]
    Flow(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
