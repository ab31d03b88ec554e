//! Recursion coefficients along invariant orbits, residue checks on
//! localized series, and broken-orbit sums on the abelian quotient.

mod broken;
mod edge;
mod orbit;
mod vanishing;
mod verify;

use exact_core::CoreError;
use j_series::JSeriesError;
use thiserror::Error;

pub use broken::{chain_coeff, coeff_broken, compose_check, enumerate_broken, BrokenCoeff, BrokenOrbit, Component};
pub use edge::{edge_coeff, edge_raw, euler_ratio, pushforward, pushforward_weights, tangent_roots, EulerRatio};
pub use orbit::{
    all_x_orbits, cover_map, covered, nondegenerate_y_orbits, FixedPoint, OrbitDatum, OrbitDescriptor, Side,
};
pub use vanishing::{check_vanishing, ReductionEntry, VanishingEntry, VanishingReport};
pub use verify::{
    designated_root, gamma_edge_identity, generic_point, localize, residue_at, verify_recursion, RecursionEntry,
    RecursionReport, ResidueEntry,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecursionError {
    #[error("invalid orbit data: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    JSeries(#[from] JSeriesError),
    #[error("NO_TRIVIAL_WEIGHT: the pushforward has no trivial weight to remove")]
    NoTrivialWeight,
    #[error("ZERO_DENOMINATOR: {0}")]
    ZeroDenominator(String),
    #[error("ROOT_NOT_RATIONAL: {0} has no rational {1}-th root")]
    RootNotRational(String, u32),
    #[error("UNPAIRED_ZERO: found {found} trivial weights, expected {expected}")]
    UnpairedZero { found: i64, expected: i64 },
}
