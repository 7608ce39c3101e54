use thiserror::Error;

/// Workbench failures. Everything the math layer rejects arrives as
/// [`Error::Core`].
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] sd_core::Error),
    #[error("unknown format `{0}`")]
    UnknownFormat(String),
    #[error("cannot tell the format of the input: {0}")]
    UndetectedFormat(String),
    #[error("operation needs {expected} data, session holds {found}")]
    WrongKind { expected: &'static str, found: &'static str },
    #[error("unknown session `{0}`")]
    UnknownSession(String),
    #[error("unsupported session schema version {0}")]
    SchemaVersion(u32),
    #[error("replaying the history does not reproduce the stored state")]
    ReplayMismatch,
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Process exit codes of the `sd` binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    InvariantViolation = 1,
    ParseError = 2,
    WrongKind = 3,
}

impl Error {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Error::Core(e) if e.is_parse() => ExitCode::ParseError,
            Error::Core(_) | Error::ReplayMismatch | Error::UnknownSession(_) => {
                ExitCode::InvariantViolation
            }
            Error::UnknownFormat(_)
            | Error::UndetectedFormat(_)
            | Error::SchemaVersion(_)
            | Error::Io { .. } => ExitCode::ParseError,
            Error::WrongKind { .. } => ExitCode::WrongKind,
        }
    }

    /// Short machine-readable category, used by the HTTP layer.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Core(e) if e.is_parse() => "parse",
            Error::Core(_) | Error::ReplayMismatch => "invariant",
            Error::UnknownFormat(_) | Error::UndetectedFormat(_) | Error::SchemaVersion(_) => {
                "format"
            }
            Error::WrongKind { .. } => "wrong_kind",
            Error::UnknownSession(_) => "not_found",
            Error::Io { .. } => "io",
        }
    }
}
