//! Exact arithmetic on q-rational functions kept in factored binomial form.
//!
//! A [`FactoredTerm`] is `scalar * lead * prod (1 - m)^e` with monomials `m`
//! in the variables of [`VarId`]; a [`QSum`] is a finite sum of them. Nothing
//! is ever normalized through polynomial gcds, so poles stay visible.

mod error;
mod identity;
mod monomial;
pub mod rational;
mod series;
mod spec;
mod term;
mod var;

pub use error::{CoreError, Result};
pub use identity::{
    common_numerator, degree_hint, exact_equal, failure_bound, qsum_equal, qsum_equal_under, sample_nonzero,
    sample_point, scope, LaurentPoly, MAX_REJECTIONS, SAMPLE_RADIUS,
};
pub use monomial::Monomial;
pub use rational::Rational;
pub use series::{
    expand_term, limit_in, local_expand, local_expand_in, max_pole_order, residue_dq_over_q, residue_dq_over_q_in,
    term_valuation, LocalSeries,
};
pub use spec::{eval_sum, eval_sum_in, eval_term, eval_term_in, EvalResult, Specialization};
pub use term::{q_shift, qprod, Factor, FactoredTerm, QSum, TermStatus};
pub use var::{AuxKind, VarId};
