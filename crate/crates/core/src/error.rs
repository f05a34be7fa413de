use thiserror::Error;

/// Errors raised by the modelling, estimation and optimization layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("sample {index} is not finite")]
    NonFiniteSample { index: usize },
    #[error("series has {len} samples, at least {required} required")]
    SeriesTooShort { len: usize, required: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("input is empty")]
    EmptyInput,
    #[error("invalid length: {0}")]
    InvalidLength(String),
    #[error("lag {max_lag} is too large for a series of length {len}")]
    LagTooLarge { max_lag: usize, len: usize },
    #[error("series is constant")]
    ConstantSeries,
    #[error("prediction-error power vanished at recursion stage {stage}")]
    NumericallySingular { stage: usize },
    #[error("regression design is singular")]
    SingularDesign,
    #[error("c1 + c2 = {phi} must exceed 4")]
    PhiOutOfRange { phi: f64 },
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("objective is not finite for particle {particle}")]
    ObjectiveNonFinite { particle: usize },
    #[error("error variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("h = {h} must be smaller than H = {big_h}")]
    DegenerateRatio { h: usize, big_h: usize },
    #[error("actual data is constant")]
    ConstantActual,
    #[error("baseline error must be positive, got {0}")]
    NonPositiveBaseline(f64),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

impl Error {
    /// True for failures of the numerics rather than of the supplied data
    /// or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericallySingular { .. }
                | Error::SingularDesign
                | Error::ObjectiveNonFinite { .. }
                | Error::NonPositiveVariance(_)
        )
    }

    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::PhiOutOfRange { .. }
                | Error::InvalidConfig(_)
                | Error::InvalidModel(_)
                | Error::InvalidLength(_)
                | Error::DegenerateRatio { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
