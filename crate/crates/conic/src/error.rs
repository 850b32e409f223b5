use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConicError {
    #[error("block index {0} does not exist")]
    NoSuchBlock(usize),
    #[error("block {block}: entry ({i}, {j}) lies outside a block of order {size}")]
    EntryOutOfRange {
        block: usize,
        i: usize,
        j: usize,
        size: usize,
    },
    #[error("block {block} is diagonal but entry ({i}, {j}) is off-diagonal")]
    OffDiagonalEntry { block: usize, i: usize, j: usize },
    #[error("coefficient data is not symmetric in block {block} at ({i}, {j})")]
    NonSymmetric { block: usize, i: usize, j: usize },
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("program exceeds solver limits: {0}")]
    TooLarge(String),
    #[error("the exact simplex only accepts diagonal blocks")]
    PsdBlockInLp,
    #[error("solution shape does not match program: {0}")]
    ShapeMismatch(String),
    #[error("SDPA line {line}: {msg}")]
    Sdpa { line: usize, msg: String },
}
