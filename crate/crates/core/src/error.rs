use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph has no vertex weights")]
    MissingVertexWeights,

    #[error("vertex {vertex} out of range (vertex count {count})")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("tree and graph do not match: {0}")]
    Mismatch(String),

    #[error("graph is not a 4-adjacency grid")]
    NotAGrid,

    #[error("malformed raster: {0}")]
    Format(String),

    #[error("malformed dendrogram: {0}")]
    Dendrogram(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
