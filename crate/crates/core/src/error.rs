use alloc::string::String;

/// Failures reported by the engine.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("not D-finite: {0}")]
    NotDFinite(String),
    #[error("singular shift matrix: {0}")]
    SingularShiftMatrix(String),
    #[error("no cyclic vector found: {0}")]
    NoCyclicVectorFound(String),
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("a denominator factor matches no shift class")]
    ClassMismatch,
}
