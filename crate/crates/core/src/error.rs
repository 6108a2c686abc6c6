use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element {index} is outside the universe of size {size}")]
    OutOfRange { index: usize, size: usize },

    #[error("relation `{0}` is declared more than once")]
    DuplicateRelation(String),

    #[error("relation `{name}` has arity {arity}; only unary and binary relations are supported")]
    BadArity { name: String, arity: usize },

    #[error("unknown relation `{0}`")]
    UnknownRelation(String),

    #[error("tuple {tuple:?} of relation `{name}` has the wrong width")]
    TupleWidth { name: String, tuple: Vec<usize> },

    #[error("signatures differ")]
    SignatureMismatch,

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("saturation infeasible within {limit} elements: {demand}")]
    Infeasible { limit: usize, demand: String },

    #[error("{axiom} fails at {witness:?}")]
    Axiom { axiom: String, witness: Vec<String> },

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
