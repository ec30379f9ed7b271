use crate::network::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("epistasis degree k={k} is impossible for n={n} bits (need k <= n-1)")]
    EpistasisTooLarge { n: usize, k: usize },

    #[error("landscape needs {entries} table entries, above the limit of {limit}")]
    LandscapeTooLarge { entries: u128, limit: u64 },

    #[error("invalid landscape: {0}")]
    InvalidLandscape(String),

    #[error("genome length {actual} does not match expected length {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("bit index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("node {0} already exists")]
    DuplicateNode(NodeId),

    #[error("ring needs at least 3 nodes, got {0}")]
    RingTooSmall(usize),

    #[error("node {0} has no links to transfer")]
    NoLinks(NodeId),

    #[error("winner and loser must differ (node {0})")]
    SelfTransfer(NodeId),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operation needs at least {needed} items, got {got}")]
    TooFew { needed: usize, got: usize },

    #[error("degenerate fit input: {0}")]
    DegenerateFit(String),

    #[error("record shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("operation requires a structured (cellular or sotea) population")]
    NotStructured,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
