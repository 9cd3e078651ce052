use crate::poset::{LatticeError, PosetError};

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget { what: &'static str, needed: u128, limit: u128 },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: usize, found: usize },
    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("value {value} out of range for domain of size {domain}")]
    ValueOutOfRange { value: u64, domain: u64 },
    #[error("the set must be nonempty")]
    EmptySet,
    #[error("base {base:?} is not a projection of the set below element {element}")]
    EmptySlice { element: usize, base: Vec<u32> },
    #[error("the set is not a neighbourhood")]
    NotNeighbourhood,
    #[error("{0}")]
    Hypothesis(String),
    #[error("elements {0:?} do not form a down set")]
    NotDownset(Vec<usize>),
    #[error("the neighbourhood is not c-minimal")]
    NotCMinimal,
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("recovered relation is not a partial order: {0}")]
    RecoveredOrder(PosetError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
