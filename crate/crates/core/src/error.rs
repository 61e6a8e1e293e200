use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `Config` errors are caller mistakes (exit code 2 at the command line);
/// `Verification` errors mean a computed certificate did not hold (exit 1).
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("critical or inadmissible exponents: delta = {delta} (need delta > 0)")]
    NotAdmissible { delta: f64 },

    #[error("point outside the profile domain: r = {0}")]
    Domain(f64),

    #[error("derivative of order {order} requested at interface r = {r}")]
    InterfaceDerivative { r: f64, order: u8 },

    #[error("degenerate gradient at shell {shell}, r = {r}")]
    DegenerateGradient { shell: usize, r: f64 },

    #[error("no sign change of the flux-matching function on shell {shell}")]
    NoRoot { shell: usize },

    #[error("drift rate {alpha} is below the certified threshold {alpha0}")]
    AlphaBelowThreshold { alpha: f64, alpha0: f64 },

    #[error("non-finite integrand at shell {shell}, r = {r}")]
    NonFinite { shell: usize, r: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("solver did not converge after {iterations} iterations (last energy {energy})")]
    NoConvergence { iterations: usize, energy: f64 },

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by the caller's input rather than by a failed check.
    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::NotAdmissible { .. } | Error::Domain(_) | Error::GridMismatch(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
