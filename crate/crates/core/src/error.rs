use thiserror::Error;

use crate::verdict::Violation;

/// Errors raised by constructors and operations whose preconditions fail.
///
/// Law failures found by a *check* are never errors: they come back as a
/// failing [`crate::VerdictReport`]. Errors are reserved for inputs that
/// cannot be interpreted at all, or for contracts the caller broke.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Dangling ids, duplicate names, missing table rows.
    #[error("malformed structure: {0}")]
    Structure(String),
    /// A value that was required to satisfy laws does not.
    #[error("law violated: {0}")]
    Law(Violation),
    /// Categories, functors or transformations that do not line up.
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search space of {size} exceeds budget {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("universe: {0}")]
    Universe(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
