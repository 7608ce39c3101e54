use thiserror::Error;

/// Errors raised while building or combining decision data.
///
/// Variants that stem from a broken data invariant are grouped under
/// [`Error::is_invariant_violation`]; the CLI maps them to a dedicated exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alternative set is empty")]
    EmptyAlternatives,

    #[error("duplicate alternative id `{0}`")]
    DuplicateAlternative(String),

    #[error("unknown alternative id `{0}`")]
    UnknownAlternative(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("alternative sets differ")]
    BaseMismatch,

    #[error("skew-symmetry violated at ({row}, {col}): {forward} vs {backward}")]
    NotSkewSymmetric {
        row: String,
        col: String,
        forward: f64,
        backward: f64,
    },

    #[error("diagonal entry ({0}, {0}) must be zero")]
    NonzeroDiagonal(String),

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: String, col: String },

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("level must be nonnegative, got {0}")]
    NegativeLevel(f64),

    #[error("non-strict level relation requires a positive level, got {0}")]
    NonPositiveLevel(f64),

    #[error("level relations come from different source matrices")]
    ProvenanceMismatch,

    #[error("criterion family is empty")]
    EmptyFamily,

    #[error("expert panel is empty")]
    EmptyPanel,

    #[error("expert `{expert}` leaves ({x}, {y}) incomparable; use the abstention tally")]
    IncomparablePair { expert: String, x: String, y: String },

    #[error("expert `{expert}` gives conflicting verdicts on ({x}, {y})")]
    ConflictingVerdict { expert: String, x: String, y: String },

    #[error("presence mask is not symmetric at ({row}, {col})")]
    AsymmetricMask { row: String, col: String },

    #[error("|{value}| at ({row}, {col}) exceeds the bound {bound}")]
    OutOfBound {
        row: String,
        col: String,
        value: f64,
        bound: f64,
    },

    #[error("bound must be finite and nonnegative, got {0}")]
    InvalidBound(f64),

    #[error("pair ({0}, {1}) is already known")]
    PairAlreadyPresent(String, String),

    #[error("cannot refine a diagonal pair ({0}, {0})")]
    DiagonalPair(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }

    pub fn is_invariant_violation(&self) -> bool {
        !self.is_parse()
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
