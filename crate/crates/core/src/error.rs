use alloc::string::String;

use crate::arith::ArithError;
use crate::graph::GraphError;
use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("compartment {0} is not an output")]
    NotAnOutput(usize),
    #[error("oracle limited to small models (n = {n}, at most {max})")]
    OracleTooLarge { n: usize, max: usize },
    /// The evaluation point hit a measure-zero coincidence; a fresh point
    /// should be drawn.
    #[error("degenerate evaluation point: {0}")]
    Degenerate(&'static str),
    #[error("no regular evaluation point found after {0} attempts")]
    NoRegularPoint(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("not an identifiable cycle model: {0}")]
    NotIcm(String),
    #[error("invalid tiered union: {0}")]
    TieredUnion(String),
}

impl Error {
    /// Whether retrying at a fresh random point may succeed.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::Degenerate(_) | Error::Arith(ArithError::NotInvertible)
        )
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
