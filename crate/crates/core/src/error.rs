use alloc::string::String;

/// Errors shared by every module of the crate.
///
/// Variants fall into three families that callers (notably the CLI) map to
/// distinct exit statuses; see [`Error::kind`].
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge {edge} out of range for {m} edges")]
    EdgeOutOfRange { edge: usize, m: usize },
    #[error("codegree needs two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("malformed hypergraph: {0}")]
    Malformed(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("n*d = {nd} is not divisible by u = {u}")]
    Divisibility { nd: usize, u: usize },
    #[error("size cap exceeded: {size} > {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error("labelling does not match hypergraph: {0}")]
    LabellingMismatch(String),
    #[error("uniformity mismatch: {0} vs {1}")]
    UniformityMismatch(usize, usize),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("matching edges {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// Coarse classification of an [`Error`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Precondition,
    Budget,
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::BudgetExhausted(_) => ErrorKind::Budget,
            Error::Invariant(_) | Error::Overlap(..) => ErrorKind::Internal,
            _ => ErrorKind::Precondition,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
