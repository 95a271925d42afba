use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("frequency radius {radius} is not below the Nyquist limit {nyquist}")]
    Nyquist { radius: f64, nyquist: f64 },
    #[error("aliasing guard violated: 3 * {radius} >= Nyquist limit {nyquist}")]
    Aliasing { radius: f64, nyquist: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
    #[error("non-finite value encountered at step {step} (t = {time})")]
    NonFinite { step: usize, time: f64 },
    #[error("time {0} is outside the stored trajectory")]
    TimeOutOfRange(f64),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
