use exact_core::{FactoredTerm, Monomial, TermStatus, VarId};
use flag_geometry::{enumerate_degrees, fixed_points_x, x_restriction, DegreeVector, FixedPointX, FlagShape};
use j_series::x_small;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeGapResult {
    pub d: DegreeVector,
    /// Denominator minus numerator `q`-degree of `(1-q) J_d`.
    pub s: i64,
}

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

/// Closed formula for the gap:
/// `sum_{d_is > d_{i+1,r}} C(d_is - d_{i+1,r} + 1, 2) - sum_{d_is > d_ir} C(d_is - d_ir + 1, 2) - 1`.
pub fn degree_gap(shape: &FlagShape, d: &DegreeVector) -> DegreeGapResult {
    let mut s = -1;
    for (i, a) in shape.slots() {
        let da = d.get(i, a);
        for r in 1..=shape.dim(i + 1) {
            let k = da - d.get(i + 1, r);
            if k > 0 {
                s += binom2(k + 1);
            }
        }
        for r in (1..=shape.dim(i)).filter(|&r| r != a) {
            let k = da - d.get(i, r);
            if k > 0 {
                s -= binom2(k + 1);
            }
        }
    }
    DegreeGapResult { d: d.clone(), s }
}

/// Literal gap of a factored term: only binomials `1 - c q^l` with `l > 0`
/// carry `q`-degree.
fn literal_gap(t: &FactoredTerm) -> i64 {
    -t.factors().map(|(m, e)| m.exponent(VarId::Q).max(0) * e).sum::<i64>()
}

/// Literal gap of `(1-q) J_d` localized at every fixed point; `None` where
/// the localized term is exactly zero.
pub fn factor_count_gaps(shape: &FlagShape, d: &DegreeVector) -> Vec<(FixedPointX, Option<i64>)> {
    let mut t = x_small(shape, d);
    t.mul_factor(Monomial::var(VarId::Q), 1);
    fixed_points_x(shape)
        .into_iter()
        .map(|a| {
            let local = t.substitute(&x_restriction(shape, &a));
            let g = match local.status() {
                TermStatus::Regular => Some(literal_gap(&local)),
                _ => None,
            };
            (a, g)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapReport {
    pub shape: FlagShape,
    pub bound: i64,
    pub entries: Vec<GapEntry>,
    /// `S >= 1` for every nontrivial degree and every literal gap `>= 1`.
    pub holds: bool,
    /// The literal gap equals `S` wherever the localized term is nonzero.
    pub oracle_agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapEntry {
    pub d: DegreeVector,
    pub s: i64,
    pub literal: Vec<Option<i64>>,
}

/// Gap property of the small J-function for all nontrivial `|d| <= bound`.
pub fn small_j_property(shape: &FlagShape, bound: i64) -> GapReport {
    let entries: Vec<GapEntry> = enumerate_degrees(shape, bound)
        .into_par_iter()
        .filter(|d| !d.is_zero())
        .map(|d| {
            let s = degree_gap(shape, &d).s;
            let literal = factor_count_gaps(shape, &d).into_iter().map(|(_, g)| g).collect();
            GapEntry { d, s, literal }
        })
        .collect();
    let holds = entries.iter().all(|e| e.s >= 1 && e.literal.iter().flatten().all(|g| *g >= 1));
    let oracle_agrees = entries.iter().all(|e| e.literal.iter().flatten().all(|g| *g == e.s));
    GapReport { shape: shape.clone(), bound, entries, holds, oracle_agrees }
}
