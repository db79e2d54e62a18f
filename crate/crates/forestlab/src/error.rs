use thiserror::Error;

/// Errors shared by all forestlab modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(u32, u32),
    #[error("edge {0}-{1} already present")]
    DuplicateEdge(u32, u32),
    #[error("edge {0}-{1} not present")]
    MissingEdge(u32, u32),
    #[error("self-loop at vertex {0}")]
    SelfLoop(u32),
    #[error("component is not a tree")]
    NotATree,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("empty input: {0}")]
    Empty(String),
    #[error("forest shape contains a non-tree part")]
    NonTreePart,
    #[error("hull code has {0} exit vertices, expected 1")]
    ExitCount(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("membership oracle failed on a queried graph")]
    Oracle,
}

pub type Result<T> = std::result::Result<T, Error>;
