use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {what} = {value} is outside the allowed range")]
    Domain { what: &'static str, value: f64 },

    #[error("non-decaying parameters: {0}")]
    Divergent(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("frequency grid too narrow: {lost:.3e} of the spectral weight lies outside (limit {limit:.1e})")]
    Truncation { lost: f64, limit: f64 },

    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("heralding probability {p:e} too small for a conditional fidelity")]
    UndefinedFidelity { p: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures caused by bad user input rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Domain { .. } | Error::Io(_))
    }
}
