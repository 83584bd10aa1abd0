use thiserror::Error;

/// Crate-wide error type.
///
/// The variants map onto the failure classes surfaced by the CLI:
/// formatting/I/O problems, key integrity problems, and misuse of an
/// operation's preconditions.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violated an operation precondition (bad grid size, empty
    /// permutation, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A media container could not be read or written (bad magic, truncated
    /// payload, unsupported encoding, ...).
    #[error("format error: {0}")]
    Format(String),

    /// A key file is syntactically malformed.
    #[error("key parse error at line {line}: {msg}")]
    KeyParse { line: usize, msg: String },

    /// A key file is well-formed but fails an integrity check, e.g. its grid
    /// violates a Sudoku constraint. Signals tampering.
    #[error("tampered key: {0}")]
    TamperedKey(String),

    /// A key does not match the data it is being applied to (wrong
    /// dimensions, wrong media type, wrong sample count).
    #[error("key mismatch: {0}")]
    KeyMismatch(String),

    /// A key is structurally unusable for the requested operation.
    #[error("invalid key: {0}")]
    InvalidKey(String),

    /// Two inputs that must share a shape do not.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
