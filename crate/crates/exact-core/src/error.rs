use thiserror::Error;

use crate::VarId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("variable {0} has no value in the specialization")]
    UnboundVariable(VarId),
    #[error("pole of order {order} exceeds the expansion window ({window})")]
    WindowTooSmall { order: i64, window: i64 },
    #[error("series precision exhausted: {0}")]
    InsufficientPrecision(String),
    #[error("ill-defined term: {0}")]
    IllDefined(String),
    #[error("no admissible sample point after {0} attempts")]
    RejectionExhausted(usize),
    #[error("variable {0} was assigned the value zero")]
    ZeroValue(VarId),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
