use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph is disconnected")]
    Disconnected,
    #[error("expected {expected} coefficients, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("divisor is not effective")]
    NotEffective,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed file: {0}")]
    Parse(String),
    #[error("Chabauty hypothesis fails: rank r = {r} is not less than genus g = {g}")]
    ChabautyHypothesis { g: u64, r: u64 },
    #[error("no unconditional bound available at these parameters")]
    NoUnconditionalBound,
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors caused by malformed or out-of-contract input, as
    /// opposed to a violated mathematical hypothesis or a failed self-check.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::ChabautyHypothesis { .. } | Error::NoUnconditionalBound | Error::Internal(_))
    }
}
