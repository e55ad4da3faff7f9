use thiserror::Error;

/// Errors raised by the algebra and pipeline layers.
///
/// Mathematical verdicts that are expected outcomes (a candidate that is not a
/// member, an unsolvable linear system) are *not* errors; they are returned as
/// ordinary values by the operations concerned.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid candidate: {0}")]
    InvalidCandidate(String),
    #[error("candidate is not on the corank-2 stratum (middle homology {0})")]
    NotAMember(usize),
    #[error("candidate does not lie on the corank-2 stratum (corank {0})")]
    NotOnStratum(usize),
    #[error("monad is degenerate: {0}")]
    MonadDegenerate(String),
    #[error("monad defect: {0}")]
    MonadDefect(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("Hilbert function is not yet polynomial on the given range: {0}")]
    NotPolynomialYet(String),
    #[error("anomalous class during adjunction: {0}")]
    AnomalousClass(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
