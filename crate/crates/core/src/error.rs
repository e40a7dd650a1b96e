use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// An operation was applied outside its algebraic domain, such as an
    /// inexact quotient.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid atom: {0}")]
    InvalidAtom(String),

    #[error("singular presentation: {0}")]
    Singular(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    /// The linear system is consistent-shaped but has no solution.
    #[error("linear system has no solution")]
    NoSolution,

    #[error("not found: {0}")]
    NotFound(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Preconditions of a base change, one entry per violated condition.
    #[error("base change rejected: {}", .0.join("; "))]
    BaseChange(Vec<String>),

    #[error("no complement: {0}")]
    NoComplement(String),

    /// Jordan data failing the necessary conditions, one entry per failure.
    #[error("infeasible data: {}", .0.join("; "))]
    Infeasible(Vec<String>),

    /// A randomized or staged solver ran out of budget. This never asserts
    /// that no solution exists.
    #[error("solver budget exhausted: {0}")]
    BudgetExhausted(String),
}
