use thiserror::Error;

use crate::graph::EdgeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge {0} has non-positive length")]
    NonpositiveLength(EdgeId),
    #[error("edge {0} references a vertex that does not exist")]
    DanglingEndpoint(EdgeId),
    #[error("point does not lie on the graph")]
    PointOffGraph,
    #[error("edge {0} not found")]
    EdgeNotFound(EdgeId),
    #[error("divisor has degree -2")]
    DegreeMinusTwo,
    #[error("g(D,y) + g(y,y) is not constant: {0}")]
    ConstancyViolation(String),
    #[error("divisor coefficients satisfy a + b = 0")]
    DegenerateDivisor,
    #[error("coefficient must be positive")]
    NonpositiveCoefficient,
    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("fiber genus {0} is below 2")]
    GenusTooSmall(u64),
    #[error("node {0} not found")]
    NodeNotFound(usize),
    #[error("fiber configuration is not a chain of stable components")]
    NotAChain,
    #[error("no reference regime applies; pass --smooth, --irreducible, or use genus 2")]
    RegimeUnspecified,
    #[error("linear system is singular")]
    Singular,
}

impl Error {
    /// Errors caused by a mathematical precondition rather than malformed input.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::DegreeMinusTwo
                | Error::DegenerateDivisor
                | Error::NonpositiveCoefficient
                | Error::NotAChain
                | Error::RegimeUnspecified
                | Error::ConstancyViolation(_)
                | Error::Singular
        )
    }
}
