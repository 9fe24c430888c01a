use std::path::PathBuf;

/// Errors raised anywhere in the simulator.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("degenerate cluster draw: x_n must lie in (0, 1], got {0}")]
    DegenerateDraw(f64),

    #[error("all cluster powers are zero")]
    AllZeroPower,

    #[error("CIR has no LOS cluster")]
    MissingLos,

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("combiner inputs target different total powers ({lc} dB vs {ec} dB)")]
    MismatchedTargets { lc: f64, ec: f64 },

    #[error("no sample exceeds the detection threshold")]
    NoDetection,

    #[error("empty sample set")]
    EmptySamples,

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors that stem from bad user input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
