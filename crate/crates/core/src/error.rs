use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("size bound exceeded: {what} needs {needed} elements, bound is {bound}")]
    SizeBound {
        what: String,
        needed: u128,
        bound: u128,
    },

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("element {0} is not in the carrier")]
    NotInCarrier(String),

    #[error("operation table is not closed: {0}")]
    NotClosed(String),

    #[error("mismatched carriers: {0}")]
    Mismatch(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

/// Default bound on the number of carrier elements (or points) any single
/// construction may materialise.
pub const DEFAULT_SIZE_BOUND: u128 = 10_000_000;

/// Environment variable that overrides [`DEFAULT_SIZE_BOUND`].
pub const SIZE_BOUND_ENV: &str = "SUGIHARA_SIZE_BOUND";

/// The size bound in effect: the environment override if it parses, otherwise
/// the default.
pub fn size_bound() -> u128 {
    std::env::var(SIZE_BOUND_ENV)
        .ok()
        .and_then(|v| v.trim().replace('_', "").parse().ok())
        .unwrap_or(DEFAULT_SIZE_BOUND)
}

pub(crate) fn check_bound(what: impl Into<String>, needed: u128, bound: u128) -> Result<()> {
    if needed > bound {
        return Err(Error::SizeBound {
            what: what.into(),
            needed,
            bound,
        });
    }
    Ok(())
}
