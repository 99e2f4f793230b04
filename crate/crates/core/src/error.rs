use thiserror::Error;

use crate::ltlf::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which configured budget was exhausted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    States(usize),
    Nodes(usize),
}

impl std::fmt::Display for Limit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Limit::States(n) => write!(f, "more than {n} states"),
            Limit::Nodes(n) => write!(f, "more than {n} MTBDD nodes"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("resource limit exceeded: {0}")]
    Resource(Limit),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("formula is not in negative normal form: {0}")]
    NotNnf(String),
    #[error("position {position} is out of range for a word of length {len}")]
    PositionOutOfRange { position: usize, len: usize },
    #[error("assignment covers {got} variables, expected {expected}")]
    AssignmentMismatch { got: usize, expected: usize },
    #[error("vertex declared twice")]
    DuplicateVertex,
    #[error("unknown vertex")]
    UnknownVertex,
    #[error("explicit oracle guard exceeded: {0}")]
    OracleGuard(String),
    #[error("variable order can only be set on an empty table")]
    OrderAfterAllocation,
    #[error("invalid variable order: {0}")]
    InvalidOrder(String),
    #[error("automaton dump, line {line}: {message}")]
    Dump { line: usize, message: String },
    #[error("unsupported terminal payload: {0}")]
    Payload(String),
    #[error("no strategy: {0}")]
    Strategy(String),
}

impl Error {
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource(_))
    }
}
