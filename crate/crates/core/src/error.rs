use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot invert a series with no nonzero known coefficient")]
    ZeroSeriesInversion,
    #[error("formal divergence: {0}")]
    FormalDivergence(String),
    #[error("unsupported shift m = {0}")]
    UnsupportedShift(i64),
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("unknown parameter `{param}` for {id}")]
    UnknownParameter { id: String, param: String },
    #[error("order {0} cannot be reached by this computation")]
    PrecisionLoss(i64),
}

pub type Result<T> = std::result::Result<T, Error>;
