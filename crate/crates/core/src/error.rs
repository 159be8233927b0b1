use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("invalid structure: {0}")]
    Structure(String),

    #[error("point {point:?} is not in the Weyl chamber")]
    Domain { point: Vec<i64> },

    #[error("invalid walk at step {index}: {reason}")]
    Walk { index: usize, reason: String },

    #[error("partition contains a {found}-crossing, but k = {k}")]
    Crossing { k: usize, found: usize },

    #[error("table too large: {cells} cells requested, limit is {limit}")]
    TableTooLarge { cells: u128, limit: u128 },

    #[error("table has no entry for shape {shape:?} at length {len} (preprocessing does not cover it)")]
    MissingEntry { shape: Vec<u32>, len: usize },

    #[error("table covers lengths up to {available}, but length {required} is required")]
    InsufficientLength { required: usize, available: usize },

    #[error("cache mismatch in `{field}`: expected {expected}, found {found}")]
    CacheMismatch {
        field: &'static str,
        expected: String,
        found: String,
    },

    #[error("cache parse error in {path:?} at line {line} (byte offset {offset}): {reason}")]
    CacheParse {
        path: PathBuf,
        line: usize,
        offset: usize,
        reason: String,
    },

    #[error("guard exceeded: {what} = {value}, limit is {limit}")]
    Guard {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("sample {0} is outside the enumerated universe")]
    OutsideUniverse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Error {
    Error::Parameter {
        name,
        reason: reason.into(),
    }
}
