use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("nodes belong to different BC(n,k) dimensions")]
    DimsMismatch,
    #[error("digit {digit} out of range for radix {n}")]
    DigitOutOfRange { digit: u8, n: u8 },
    #[error("dimension {dim} out of range for k = {k}")]
    DimOutOfRange { dim: u8, k: u8 },
    #[error("labels must be distinct (got {0} twice)")]
    SameLabel(u8),
    #[error("nodes differ in {0} digits, not exactly one")]
    NotAnEdge(usize),
    #[error("radix {n} below minimum {min} for this operation")]
    RadixTooSmall { n: u8, min: u8 },
    #[error("k = 0 has no subgraph partition")]
    NoSplit,
    #[error("cannot parse node string {0:?}")]
    ParseNode(String),
    #[error("level index k = {k} exceeds supported maximum {max}")]
    TooManyLevels { k: u8, max: u8 },
    #[error("no Hamiltonian path exists (search exhausted)")]
    NoPath,
    #[error("no paired 2-DPC exists (search exhausted)")]
    NoDpc,
    #[error("no exit pair with fault-free cross edges found")]
    ExitPairNotFound,
    #[error("no escape node with a fault-free cross edge found")]
    EscapeNotFound,
    #[error("no bridge edge with fault-free cross edges found")]
    BridgeNotFound,
    #[error("instance with {nodes} nodes exceeds search cap {cap}")]
    TooLarge { nodes: u64, cap: u64 },
    #[error("invalid endpoint quadruple: {0}")]
    InvalidQuad(String),
    #[error("faulty edge {0} is not a valid edge of this topology")]
    InvalidFaultEdge(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
