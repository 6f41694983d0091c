use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed formula or inference text. `pos` is a 0-based character offset.
    #[error("syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("valuation does not assign atom `{0}`")]
    MissingAtom(String),

    #[error("{what}: {count} exceeds the configured cap of {cap}")]
    Resource {
        what: &'static str,
        count: u128,
        cap: u128,
    },

    #[error("unknown scheme `{0}` (expected strong, weak, middle, id:<4-bit code> or a file path)")]
    UnknownScheme(String),

    #[error("scheme is not Boolean normal monotonic: {0}")]
    NotBnm(String),

    #[error("scheme file line {line}: {message}")]
    SchemeFormat { line: usize, message: String },

    #[error("inference set file line {line}: {message}")]
    SetFormat { line: usize, message: String },

    #[error("invalid universe: {0}")]
    Universe(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
