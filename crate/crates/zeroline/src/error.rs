use thiserror::Error;

/// Crate-wide error type.
///
/// `Unknown` and `Unsupported` are deliberate, first-class outcomes: `Unknown`
/// means the query depends on a divisible residue over R or C that the normal
/// forms cannot certify, `Unsupported` means the (field, degree) combination
/// lies outside the exact classification tables. Neither ever stands in for a
/// computable answer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero is not a unit")]
    ZeroInput,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("undecidable: {0}")]
    Unknown(String),
    #[error("incompatible pair: {0}")]
    IncompatiblePair(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("internal: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_unknown(&self) -> bool {
        matches!(self, Error::Unknown(_))
    }

    pub fn is_unsupported(&self) -> bool {
        matches!(self, Error::Unsupported(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
