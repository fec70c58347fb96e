use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("no tensor named `{0}` in parameter set")]
    UnknownTensor(String),
    #[error("tensor `{0}` already registered")]
    DuplicateTensor(String),
    #[error("stale forward cache: params at revision {now}, cache built at {cached}")]
    StaleCache { now: u64, cached: u64 },
    #[error("checkpoint io: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint format: {0}")]
    Format(String),
    #[error("checkpoint version {got} unsupported (expected {expected})")]
    Version { expected: u32, got: u32 },
}
