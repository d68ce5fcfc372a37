use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("convergence failure: {0}")]
    Convergence(String),
    #[error("tolerance not met: best estimate {value:e} with abs_err {abs_err:e}")]
    ToleranceNotMet { value: f64, abs_err: f64 },
    #[error("maximum subdivisions reached: best estimate {value:e} with abs_err {abs_err:e}")]
    MaxSubdivisions { value: f64, abs_err: f64 },
    #[error("acceleration stalled: best estimate {value:e} with abs_err {abs_err:e}")]
    AccelerationStalled { value: f64, abs_err: f64 },
    #[error("divergent regime: {0}")]
    DivergentRegime(String),
    #[error("overflow: {0}")]
    Overflow(String),
    #[error("bound violated at x = {x:e}: {detail}")]
    BoundViolation { x: f64, detail: String },
    #[error("bracket failure: {0}")]
    BracketFailure(String),
    #[error("non-finite result: {0}")]
    NonFinite(String),
}

impl Error {
    /// True for errors caused by invalid input rather than numerical failure.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Pole(_))
    }

    /// Best available estimate carried by tolerance-type failures.
    pub fn best_estimate(&self) -> Option<(f64, f64)> {
        match *self {
            Error::ToleranceNotMet { value, abs_err }
            | Error::MaxSubdivisions { value, abs_err }
            | Error::AccelerationStalled { value, abs_err } => Some((value, abs_err)),
            _ => None,
        }
    }
}
