use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("operation requires a nonempty word")]
    EmptyWord,

    #[error("symbol {symbol} at position {position} is outside an alphabet of size {alphabet}")]
    SymbolOutOfRange {
        symbol: u8,
        position: usize,
        alphabet: u8,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("continued fraction does not cover {needed}: only {available} partial quotients available")]
    CoverageExhausted { needed: u64, available: usize },

    #[error("search budget of {budget} nodes exhausted at length {length}")]
    BudgetExhausted { budget: u64, length: usize },

    #[error("verification failed: {0}")]
    Mismatch(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable tag, used in CLI error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyWord => "empty-word",
            Error::SymbolOutOfRange { .. } => "symbol-out-of-range",
            Error::InvalidInput(_) => "invalid-input",
            Error::Overflow(_) => "overflow",
            Error::CoverageExhausted { .. } => "coverage",
            Error::BudgetExhausted { .. } => "budget",
            Error::Mismatch(_) => "mismatch",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
