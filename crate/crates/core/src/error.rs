use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: u64,
        column: u64,
        message: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "resource cap exceeded ({cap}): {intermediate_terms} intermediate terms after \
         {processed_clauses} of {total_clauses} clauses; result is partial and was discarded"
    )]
    ResourceCap {
        cap: CapKind,
        intermediate_terms: usize,
        processed_clauses: usize,
        total_clauses: usize,
    },

    #[error("oracle refuses instance: {0}")]
    OracleTooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapKind {
    MaxTerms(usize),
    MaxSeconds(u64),
}

impl std::fmt::Display for CapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CapKind::MaxTerms(n) => write!(f, "max terms {n}"),
            CapKind::MaxSeconds(s) => write!(f, "max seconds {s}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
