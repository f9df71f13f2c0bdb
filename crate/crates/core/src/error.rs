use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("state vector is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("basis index {0} out of range (expected 1..=4)")]
    BasisIndex(usize),

    #[error("initial state is not physical: {0}")]
    Unphysical(String),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("tabulated spectrum is empty")]
    EmptySpectrum,

    #[error("spectrum line {line}: {reason}")]
    SpectrumParse { line: usize, reason: String },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("time grid must start at 0 and be strictly increasing")]
    NonMonotoneGrid,

    #[error("step size underflow at t = {0}")]
    StepUnderflow(f64),

    #[error("oracle step {dt} violates (rate + K² t_end)·dt ≤ {limit}")]
    StepTooLarge { dt: f64, limit: f64 },

    #[error("oracle trajectory drifted off the physical manifold at t = {t}: {detail}")]
    PhysicalityDrift { t: f64, detail: String },

    #[error("trajectory grids differ")]
    GridMismatch,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub(crate) fn check_time(t: f64) -> Result<()> {
    if t.is_nan() {
        Err(Error::NonFinite("time"))
    } else if t < 0.0 {
        Err(Error::NegativeTime(t))
    } else {
        Ok(())
    }
}
