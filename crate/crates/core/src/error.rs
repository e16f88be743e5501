use thiserror::Error;

/// Errors raised while building or querying finite structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("ground set size {size} outside 1..={max}")]
    GroundSize { size: usize, max: usize },
    #[error("malformed mask `{0}`: expected `{{0,2,3}}` or a hex literal")]
    MaskSyntax(String),
    #[error("mask {mask} has points outside a ground set of size {ground}")]
    MaskOutsideGround { mask: String, ground: usize },
    #[error("family is not an ideal: {0}")]
    NotIdeal(String),
    #[error("relation is not a partial order: {0}")]
    NotPartialOrder(String),
    #[error("not an antichain: {0}")]
    NotAntichain(String),
    #[error("enumeration exceeded the budget of {limit} {what}")]
    Capacity { what: &'static str, limit: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("capacity exceeded: {what} over budget {limit} (states visited: {states_visited})")]
    Capacity { what: String, limit: usize, states_visited: usize },
    #[error("strategy failed at {position}: {message}")]
    Strategy { position: String, message: String },
    #[error("transform soundness failure: {0}")]
    Soundness(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::Structure(StructureError::Capacity { .. }))
    }

    pub fn strategy(position: impl ToString, message: impl ToString) -> Error {
        Error::Strategy { position: position.to_string(), message: message.to_string() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
