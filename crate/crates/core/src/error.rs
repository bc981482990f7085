use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("fractional order must lie in (0, 1], got {0}")]
    InvalidOrder(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected} samples, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("operator `{name}` is not supported: {reason}")]
    UnsupportedOperator { name: String, reason: &'static str },

    #[error("operator resolves at most {max} modes, {requested} requested")]
    InsufficientResolution { requested: usize, max: usize },

    #[error("degenerate denominator 1 - E(-lambda T^alpha) = {value:e} at mode {mode}")]
    DegenerateDenominator { mode: usize, value: f64 },

    #[error("time {t} outside [0, {horizon}]")]
    TimeOutOfRange { t: f64, horizon: f64 },

    #[error("singular linear system in forward solver")]
    SingularSystem,

    #[error("config: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Cell {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// Wrap a solver error with the experiment cell that produced it.
    pub fn in_cell(self, context: impl Into<String>) -> Self {
        Error::Cell {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True for errors caused by bad user input rather than a numerical failure.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) | Error::UnsupportedOperator { .. } => true,
            Error::Cell { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
