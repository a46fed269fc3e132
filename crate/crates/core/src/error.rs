use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),
    #[error("edge {edge} has zero length")]
    ZeroLengthEdge { edge: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("star of vertex {vertex} is not embedded (edges {first} and {second} leave in the same direction)")]
    NotImmersed { vertex: usize, first: usize, second: usize },
    #[error("quotient graph is not connected")]
    Disconnected,
    #[error("empty cell range")]
    EmptyRange,
    #[error("surgery produced a degenerate network: {0}")]
    SurgeryDegenerate(String),
    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),
    #[error("operation not applicable: {0}")]
    NotApplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
