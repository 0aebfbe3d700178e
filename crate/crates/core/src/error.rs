use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document. `line` is 1-based when known.
    #[error("{}{message}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Format { line: Option<usize>, message: String },

    #[error("{0}")]
    Invariant(String),

    #[error("unresolvable label: {0}")]
    Lookup(String),

    #[error("{0}")]
    Alignment(String),

    #[error("{0}")]
    Contract(String),

    #[error("{0}")]
    Backend(String),

    #[error("{0}")]
    Protocol(String),

    #[error("unknown {kind} `{name}` (available: {available})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        available: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(line: impl Into<Option<usize>>, message: impl Into<String>) -> Self {
        Error::Format {
            line: line.into(),
            message: message.into(),
        }
    }

    /// Stable machine-readable category, used by the CLI on failure.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Format { .. } => "format",
            Error::Invariant(_) => "invariant",
            Error::Lookup(_) => "lookup",
            Error::Alignment(_) => "alignment",
            Error::Contract(_) => "contract",
            Error::Backend(_) => "backend",
            Error::Protocol(_) => "protocol",
            Error::UnknownStrategy { .. } => "config",
            Error::Io(_) => "io",
        }
    }
}
