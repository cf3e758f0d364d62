use thiserror::Error;

/// Failure modes shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An algebraic operation received an empty set. Empty sets exist
    /// only as sentinels; no operation produces or consumes one.
    #[error("operation requires a nonempty set")]
    EmptySet,

    /// A computation left the signed 64-bit range.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// Fold counts start at 1; the 0-fold sumset is not defined here.
    #[error("fold count must be at least 1")]
    InvalidFold,

    /// The operation needs at least two distinct elements (or, for
    /// closed forms indexed by size, a size of at least two).
    #[error("operation requires a set of size at least 2")]
    InvalidSize,

    /// The input must be in normal form: minimum 0 and the positive
    /// elements coprime.
    #[error("set is not in normal form")]
    NotNormalForm,

    /// The exact solver gave up after exploring `explored` nodes.
    #[error("search budget exceeded after {explored} nodes")]
    BudgetExceeded { explored: u64 },

    /// No structure constants were found inside the scanned window.
    #[error("no stabilization found within the scanned window")]
    NoStabilization,

    /// A set literal failed to parse.
    #[error("invalid set literal: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
