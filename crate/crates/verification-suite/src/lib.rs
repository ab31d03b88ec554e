//! Global checks on flag varieties: equivariant Euler characteristics by
//! fixed-point sums, the q-degree gap of the small J-function, and the
//! comparison of level structures across the perpendicular-flag duality.

mod duality;
mod gap;
mod pairing;

use exact_core::CoreError;
use flag_geometry::{FlagShape, GeometryError};
use j_series::JSeriesError;
use thiserror::Error;

pub use duality::{
    dual_shape, level_duality_report, perpendicular, DualShape, LevelDualityEntry, LevelDualityReport, RatioMonomial,
};
pub use gap::{degree_gap, factor_count_gaps, small_j_property, DegreeGapResult, GapEntry, GapReport};
pub use pairing::{p1_residue_pairing, pairing, pairing_value, PairingQuery};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    JSeries(#[from] JSeriesError),
    #[error("RATIO_NOT_MONOMIAL: {0}")]
    RatioNotMonomial(String),
    #[error("{0}")]
    Invalid(String),
}

/// Every flag shape with ambient dimension `2..=max_ambient`.
pub fn all_shapes(max_ambient: usize) -> Vec<FlagShape> {
    let mut out = Vec::new();
    for n in 2..=max_ambient {
        for mask in 1u32..(1 << (n - 1)) {
            let v: Vec<usize> = (1..n).filter(|k| mask & (1 << (k - 1)) != 0).collect();
            out.push(FlagShape::new(v, n).expect("increasing"));
        }
    }
    out
}
