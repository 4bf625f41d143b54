use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("metric is degenerate")]
    DegenerateMetric,

    #[error("metric is not symmetric")]
    AsymmetricMetric,

    #[error("bracket violates the Jacobi identity on (e{}, e{}, e{})", .0 + 1, .1 + 1, .2 + 1)]
    JacobiFails(usize, usize, usize),

    #[error("{op}: bracket is not unimodular (Tr ad e{} != 0)", .index + 1)]
    NotUnimodular { op: &'static str, index: usize },

    #[error("{op}: Killing form is not identically zero")]
    KillingFormNonzero { op: &'static str },

    #[error("{op}: Lie algebra is not nilpotent")]
    NotNilpotent { op: &'static str },

    #[error("basis is not nice: {0}")]
    NotNice(String),

    #[error("{op}: precondition failed: {reason}")]
    Precondition { op: &'static str, reason: String },

    #[error("unsupported tensor shape: {0}")]
    UnsupportedShape(String),

    #[error("catalog line {line}: {msg}")]
    Schema { line: usize, msg: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub(crate) fn precondition(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Precondition { op, reason: reason.into() }
    }
}
