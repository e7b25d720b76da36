use thiserror::Error;

/// Errors raised by the index structures and their file formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("position {index} out of bounds (length {len})")]
    OutOfBounds { index: usize, len: usize },

    #[error("no occurrence number {k} (only {available} present)")]
    NoSuchOccurrence { k: usize, available: usize },

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("tree has fewer than two nodes")]
    DegenerateTree,

    #[error("node {0} is the tree root and belongs to no piece as a non-root node")]
    NoOwningPiece(usize),

    #[error("range [{i}, {j}] is not aligned to block length {block}")]
    AlignmentViolation { i: usize, j: usize, block: usize },

    #[error("infeasible parameters: {0}")]
    ParameterInfeasible(String),

    #[error("color {0} does not occur in the tree")]
    ColorAbsent(u32),

    #[error("color {color} outside 1..={sigma}")]
    InvalidColor { color: u32, sigma: u32 },

    #[error("node {0} has no descendant of the requested color")]
    NoAlphaDescendant(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("index format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
