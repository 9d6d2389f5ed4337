use thiserror::Error;

/// Errors raised by the numerical kernels and the certification engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("{func}: argument outside domain ({detail})")]
    Domain { func: &'static str, detail: String },

    /// A quantity that must be bounded away from a singular point is not.
    #[error("{func}: degenerate evaluation ({detail})")]
    Degenerate { func: &'static str, detail: String },

    /// An iterative method ran out of budget before meeting its tolerance.
    #[error("{func}: no convergence after {iterations} iterations (achieved error {achieved:e})")]
    NoConvergence {
        func: &'static str,
        iterations: usize,
        achieved: f64,
    },

    /// A bracket that should hold by theory does not hold numerically.
    #[error("{func}: bracket [{lo}, {hi}] does not enclose a root")]
    Bracket { func: &'static str, lo: f64, hi: f64 },

    /// Invalid scan or precision configuration.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A search exhausted its budget without certifying its target.
    #[error("{func}: budget exhausted ({detail})")]
    Budget { func: &'static str, detail: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }

    pub(crate) fn degenerate(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Degenerate {
            func,
            detail: detail.into(),
        }
    }
}
