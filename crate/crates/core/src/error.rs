use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate vertex {0} in vertex set")]
    DuplicateVertex(usize),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph is not connected ({components} components)")]
    Disconnected { components: usize },

    #[error("graph is not a cactus")]
    NotCactus,

    #[error("graph has {n} vertices, at least {min} required")]
    TooSmall { n: usize, min: usize },

    #[error("{what} is limited to {limit} vertices, got {n}")]
    SizeLimit { what: &'static str, limit: usize, n: usize },

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("malformed ordering: {0}")]
    MalformedOrdering(String),

    #[error("first three ordered vertices induce neither P3 nor K3")]
    InvalidStart,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("dimension {0} is outside the supported range 1..=16")]
    UnsupportedDimension(usize),

    #[error(
        "no admissible vector at position {position} after {attempts} attempts \
         ({constraints} orthogonality constraints, dimension {dim})"
    )]
    RetryExhausted {
        position: usize,
        attempts: usize,
        constraints: usize,
        dim: usize,
    },

    #[error("graph is not chordal")]
    NotChordal,

    #[error("contradictory facts for {graph_id}: {detail}")]
    Contradiction { graph_id: String, detail: String },

    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
}
