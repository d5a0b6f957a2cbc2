use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    /// Sampling cannot represent the requested propagation without aliasing.
    #[error(
        "{method} propagation over {distance:.4e} m aliases on this grid; \
         needs at least {min_samples} samples ({hint})"
    )]
    Aliasing {
        method: &'static str,
        distance: f64,
        min_samples: usize,
        hint: &'static str,
    },

    #[error("scan step {step}: {source}")]
    Step {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("undefined statistics: {0}")]
    UndefinedStatistics(String),

    #[error("not computable: {reason} (found {maxima} maxima, {minima} minima)")]
    NotComputable {
        reason: String,
        maxima: usize,
        minima: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input data; `line` is 1-based when known.
    #[error("data error{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Data { line: Option<u64>, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn data(line: Option<u64>, msg: impl Into<String>) -> Self {
        Error::Data {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn at_step(step: usize, source: Error) -> Self {
        Error::Step {
            step,
            source: Box::new(source),
        }
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map(|p| p.line());
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            kind => Error::Data {
                line,
                message: format!("{kind:?}"),
            },
        }
    }
}
