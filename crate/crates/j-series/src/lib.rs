//! J-series of partial flag varieties `X` and of their abelian quotients
//! `Y`, truncated by total Novikov degree and kept in factored form.
//!
//! Each coefficient is the `Q^d` coefficient of `J / (1 - q)`; the `(1 - q)`
//! prefactor is reattached by callers that need it.

mod coeff;
mod ops;
mod series;
mod variant;

use thiserror::Error;

pub use coeff::{box_inv, coefficient, cotangent_factor, gamma_inv, level_monomial, x_small};
pub use ops::{DifferenceOp, PolyTerm};
pub use series::{
    apply_op, build, cotangent_balance, descend, level_matches_x_small, weyl_check, x_key, BalanceEntry, Grading,
    JSeries, WeylEntry, WeylReport,
};
pub use variant::SeriesVariant;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JSeriesError {
    #[error(transparent)]
    Core(#[from] exact_core::CoreError),
    #[error("ill-defined: {0}")]
    IllDefined(String),
    #[error("out of scope: {0}")]
    Scope(String),
    #[error("grading: {0}")]
    Grading(String),
    #[error("parse error: {0}")]
    Parse(String),
}
