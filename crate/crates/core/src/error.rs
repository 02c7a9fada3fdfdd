use std::fmt;

/// Location of a problem inside a text input (1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TextPos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for TextPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: TextPos, msg: String },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("alphabet mismatch: host uses [0,{host}], pattern uses [0,{pattern}]")]
    AlphabetMismatch { host: u8, pattern: u8 },

    #[error("order mismatch: {0} rows vs {1} rows")]
    OrderMismatch(usize, usize),

    #[error("matrix is not simple")]
    NotSimple,

    #[error("matrix is not free of the forbidden family")]
    NotFree,

    #[error("column is already present in the matrix")]
    ColumnPresent,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn parse_err(line: usize, column: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos: TextPos { line, column },
        msg: msg.into(),
    }
}
