use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message} (expected {expected})")]
    Parse {
        line: usize,
        column: usize,
        message: String,
        expected: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("differentials do not compose to zero")]
    CompositionNonzero,
    #[error("induced map of groups is not injective (rank {rank} < {expected})")]
    NotInjective { rank: usize, expected: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("module or ring is not graded: {0}")]
    NotGraded(String),
    #[error("invalid log ring specification: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),
    #[error("log differentials are not free on the distinguished generators: {0}")]
    NotFramed(String),
    #[error("not finite dimensional: {0}")]
    NotFiniteDimensional(String),
    #[error("elements do not generate the diagonal ideal: {0}")]
    NotGenerating(String),
    #[error("relation not killed by the HKR map: {0}")]
    RelationNotKilled(String),
    #[error("operation requires characteristic zero (field has characteristic {0})")]
    WrongCharacteristic(u64),
    #[error("cyclic homology changed when widening the truncation: {0}")]
    UnstableTruncation(String),
    #[error("internal check failed: {0}")]
    CheckFailed(String),
}
