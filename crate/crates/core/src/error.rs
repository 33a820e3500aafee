use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected tile side {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("invalid chromosome: {0}")]
    InvalidChromosome(String),
    #[error("invalid placement: {0}")]
    InvalidPlacement(String),
    #[error("invalid state: {0}")]
    State(String),
}

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidInput(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
