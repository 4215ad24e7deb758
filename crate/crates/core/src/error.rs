use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("zero has no square class")]
    ZeroSquareClass,
    #[error("could not completely factor {0}")]
    FactorizationFailed(String),
    #[error("cubic is singular (zero discriminant)")]
    SingularCurve,
    #[error("point is not on the curve")]
    OffCurve,
    #[error("polynomial must be a monic cubic")]
    NotMonicCubic,
    #[error("element is not a unit of the algebra")]
    NonUnit,
    #[error("algebra element has the wrong shape for this algebra")]
    ShapeMismatch,
    #[error("invalid 2-torsion identification: {0}")]
    InvalidIdentification(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
