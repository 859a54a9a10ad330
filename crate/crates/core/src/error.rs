use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("row {row} has {found} entries, expected {expected}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("diagram has no node {0}")]
    UnknownNode(usize),
    #[error("arrow {src}->{dst} expects a map k^{} -> k^{}, got k^{} -> k^{}", expected.0, expected.1, found.0, found.1)]
    ArrowShape {
        src: usize,
        dst: usize,
        expected: (usize, usize),
        found: (usize, usize),
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("edge {0} is a loop")]
    LoopEdge(String),
    #[error("directed cycle through {}", .0.join(" -> "))]
    DirectedCycle(Vec<String>),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(String),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("paths are not composable: {first} ends at {first_target}, {second} starts at {second_source}")]
    NonComposable {
        first: String,
        first_target: String,
        second: String,
        second_source: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SieveError {
    #[error("generator {morphism} does not have codomain {expected}")]
    WrongCodomain { morphism: String, expected: String },
    #[error("cannot pull back a sieve on {sieve} along a morphism into {morphism_target}")]
    CodomainMismatch { sieve: String, morphism_target: String },
    #[error("{count} morphisms into {vertex} exceed the sieve enumeration limit of {limit}")]
    TooManyMorphisms { vertex: String, count: u128, limit: usize },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresheafError {
    #[error("expected {expected} dimensions, one per vertex, got {found}")]
    DimensionCount { expected: usize, found: usize },
    #[error("expected {expected} edge maps, one per edge, got {found}")]
    MapCount { expected: usize, found: usize },
    #[error("map for edge {edge} should be {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    MapShape {
        edge: String,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("vector of length {found} where {expected} was expected")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("section family has {found} sections for a sieve with {expected} members")]
    FamilySize { expected: usize, found: usize },
    #[error("natural transformation component at {vertex} has the wrong shape")]
    ComponentShape { vertex: String },
    #[error("naturality square fails on edge {edge}")]
    NotNatural { edge: String },
    #[error("the two functors live on different quivers")]
    QuiverMismatch,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctorError {
    #[error("not a discrete sheaf: restriction along edge {edge} is not an isomorphism")]
    NotDiscreteSheaf { edge: String },
    #[error("edge {edge} is not invertible, transport is undefined")]
    NonInvertibleEdge { edge: String },
    #[error("walk step {step} along edge {edge} does not start at {at}")]
    BrokenWalk { step: usize, edge: String, at: String },
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational {0:?}")]
    Scalar(String),
    #[error("invalid topology {0:?}, expected coarse | discrete | discrete+empty | edge | graded:N")]
    Topology(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("file kind is {found}, expected {expected}")]
    KindMismatch { expected: String, found: String },
    #[error("no dimension given for vertex {0}")]
    MissingDimension(String),
    #[error("no matrix given for edge {0}")]
    MissingMap(String),
    #[error("dimension given for unknown vertex {0}")]
    ExtraDimension(String),
    #[error("matrix given for unknown edge {0}")]
    ExtraMap(String),
    #[error("matrix for edge {edge}: {reason}")]
    Matrix { edge: String, reason: String },
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json(e.to_string())
    }
}
