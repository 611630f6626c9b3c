use crate::linalg::LinalgError;
use crate::trinity::ValidationReport;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("malformed map: {0}")]
    InvalidMap(String),
    #[error("graph is not planar (Euler characteristic {0}, expected 2)")]
    NonPlanar(i64),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    Empty,
    #[error("digraph is not balanced at vertex {0}")]
    NotBalanced(String),
    #[error("graph is not bipartite with respect to the given classes: {0}")]
    NotBipartite(String),
    #[error("invalid trinity:\n{0}")]
    InvalidTrinity(ValidationReport),
    #[error("infeasible request: {0}")]
    Infeasible(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("unknown edge {0}")]
    UnknownEdge(String),
    #[error("chip configuration has degree {0}, expected 0")]
    DegreeNonzero(i64),
    #[error("not a hypertree: {0}")]
    NotAHypertree(String),
    #[error("no representative found: {0}")]
    NotFound(String),
    #[error("invalid base: {0}")]
    InvalidBase(String),
    #[error("invalid arborescence: {0}")]
    InvalidArborescence(String),
    #[error("arborescences have different roots or directions")]
    RootMismatch,
    #[error("vertex {0} has no chip to route")]
    NoChip(String),
    #[error("cannot route at the root {0}")]
    RootRouting(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("rotor game did not terminate within {0} steps")]
    StepLimit(u64),
    #[error("line {line}, column {col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T> = std::result::Result<T, Error>;
