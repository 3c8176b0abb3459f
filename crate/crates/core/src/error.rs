use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the domain of an operation (e.g. `x ∈ B` for closeness).
    #[error("domain error: {0}")]
    Domain(String),
    /// A stated hypothesis of a checker or construction does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// Malformed instance, witness, condition or expression document.
    #[error("schema error: {0}")]
    Schema(String),
    /// Two forcing conditions disagree on their common part.
    #[error("incompatible conditions: {0}")]
    Incompatible(String),
    /// A runtime re-verification failed; this is a bug, not bad input.
    #[error("internal invariant broken: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
