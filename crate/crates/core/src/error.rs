use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("branching factor must be at least 2, got {0}")]
    InvalidBranching(u64),

    #[error("radix must be at least 2, got {0}")]
    InvalidRadix(u32),

    #[error("zero chips: the stable tree is undefined for N = 0")]
    ZeroChips,

    #[error("valuation of zero is undefined")]
    ZeroValuation,

    #[error("{value} does not fit in {width} base-{radix} digits")]
    WidthTooSmall {
        value: String,
        radix: u32,
        width: usize,
    },

    #[error("layer index {index} out of range for height {height}")]
    LayerOutOfRange { index: usize, height: usize },

    #[error("chips escaped the truncated tree at layer {layer}")]
    TruncationExceeded { layer: u32 },

    #[error("step budget of {budget} exhausted")]
    StepBudget { budget: String },

    #[error("layer {layer} is not symmetric after stabilization")]
    Asymmetric { layer: u32 },

    #[error("node-level simulation needs N below {limit}, got {n}")]
    TooLarge { n: String, limit: u64 },

    #[error("negative difference at index {index}")]
    NegativeDifference { index: u64 },

    #[error("window must hold at least {min} values, got {len}")]
    WindowTooShort { min: usize, len: usize },

    #[error("index {index} is outside the domain of {sequence}")]
    IndexOutOfDomain { sequence: String, index: u64 },

    #[error("unknown sequence `{0}`; available: {available}", available = crate::sequences::SequenceKind::NAMES.join(", "))]
    UnknownSequence(String),

    #[error("unknown strategy `{0}`; available: bfs, max, random")]
    UnknownStrategy(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
