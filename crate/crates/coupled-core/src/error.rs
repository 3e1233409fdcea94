use thiserror::Error;

/// Errors surfaced by constraint queries, objective checkers, instances and
/// solvers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {element} out of range for ground set of size {size}")]
    ElementOutOfRange { element: usize, size: usize },

    #[error("element {0} is already selected")]
    DuplicateElement(usize),

    #[error(
        "ground set of size {size} exceeds the exhaustive cap {cap}; \
         use the sampled checker (non-exhaustive) instead"
    )]
    ExhaustiveCapExceeded { size: usize, cap: usize },

    #[error(
        "enumeration budget exceeded: 2^{allocation} * 2^{deployment} candidate subsets \
         is above the 2^{budget_bits} budget"
    )]
    EnumerationBudget {
        allocation: usize,
        deployment: usize,
        budget_bits: u32,
    },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("dynamics matrix is not invertible")]
    SingularDynamics,

    #[error("invalid instance: {0}")]
    Instance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
