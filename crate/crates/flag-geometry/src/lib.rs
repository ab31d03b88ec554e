//! Combinatorics of partial flag varieties `X = Flag(v_1..v_n; N)` and their
//! abelian quotients `Y`: shapes, degree lattices, torus fixed points,
//! Chern-root restrictions and tangent characters.

mod degree;
mod fixed;
mod shape;
mod tangent;

use thiserror::Error;

pub use degree::{enumerate_degrees, enumerate_x_degrees, DegreeVector};
pub use fixed::{
    descend_monomial, fixed_points_x, fixed_points_y, lambda_top, restrict_p_x, restrict_p_y, x_restriction,
    y_restriction, FixedPointX, FixedPointY,
};
pub use shape::FlagShape;
pub use tangent::{
    check_lambda_at_distinguished, lambda_ij, tangent_chars_x, tangent_chars_y, twist_chars_y, twist_roots,
    tx_chars_signed, tx_roots, ty_roots, ChernRoot, TangentChar, TangentCharsY,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("trivial tangent characters after descent at labels {0:?}")]
    DegenerateTrivialChar(Vec<(usize, usize, usize)>),
}
