use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed table: {0}")]
    BadTable(String),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("element {0} has no two-sided inverse")]
    NonInvertible(usize),
    #[error("group order cap {cap} exceeded during closure")]
    OrderCap { cap: usize },
    #[error("morphism store cap {cap} exceeded")]
    MorphismCap { cap: usize },
    #[error("subset is not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("not a Sylow subgroup: {0}")]
    NotSylow(String),
    #[error("subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("morphism is invalid: {0}")]
    BadMorphism(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
