use std::path::PathBuf;

/// Everything that can go wrong inside the library.
///
/// `NonFinite` is special: the time integrator treats it as a graceful stop
/// signal (imminent blow-up) rather than a hard failure.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Invalid configuration; the message names the offending field.
    #[error("configuration error: {0}")]
    Config(String),

    /// A field's length does not match the grid it is used with.
    #[error("field has {found} samples but the grid has {expected}")]
    GridMismatch { expected: usize, found: usize },

    /// A Fourier multiplier evaluated to a non-finite value.
    #[error("symbol is not finite at wavenumber k = {k}")]
    NonFiniteSymbol { k: f64 },

    /// A field operation produced NaN or infinity.
    #[error("non-finite values in {0}")]
    NonFinite(&'static str),

    /// A ratio whose denominator vanished and has no meaningful value.
    #[error("undefined ratio: {0}")]
    UndefinedRatio(&'static str),

    /// A verification run that stopped before producing a usable answer.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed data while reading a file this crate wrote.
    #[error("parse error in {path} line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
