use std::collections::BTreeMap;

use exact_core::{degree_hint, qsum_equal, Monomial, QSum, TermStatus, VarId};
use flag_geometry::{enumerate_degrees, DegreeVector, FlagShape};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{coefficient, DifferenceOp, JSeriesError, SeriesVariant};

/// How the keys of a [`JSeries`] are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Grading {
    /// Keys are abelian degrees `d = (d_ij)`.
    Abelian,
    /// Keys hold one entry `delta_i` per level.
    XDegree,
}

/// Truncated series: the `Q^d` coefficients of `J / (1 - q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSeries {
    pub shape: FlagShape,
    pub variant: SeriesVariant,
    pub bound: i64,
    pub grading: Grading,
    /// Operators applied after `build`, in order.
    pub ops: Vec<DifferenceOp>,
    coeffs: BTreeMap<DegreeVector, QSum>,
}

/// Key for an X-degree.
pub fn x_key(delta: &[i64]) -> DegreeVector {
    DegreeVector::from_levels(delta.iter().map(|&x| vec![x]).collect())
}

/// Builds every coefficient with total degree at most `bound`.
pub fn build(shape: &FlagShape, variant: SeriesVariant, bound: i64) -> Result<JSeries, JSeriesError> {
    if let Some(i) = variant.level_index() {
        if i == 0 || i > shape.n() {
            return Err(JSeriesError::Scope(format!("level {i} outside 1..={}", shape.n())));
        }
    }
    let degrees = enumerate_degrees(shape, bound);
    let coeffs: BTreeMap<DegreeVector, QSum> = degrees
        .into_par_iter()
        .map(|d| {
            let t = coefficient(shape, variant, &d);
            (d, QSum::from(t))
        })
        .collect();
    Ok(JSeries { shape: shape.clone(), variant, bound, grading: Grading::Abelian, ops: Vec::new(), coeffs })
}

impl JSeries {
    pub fn coeff(&self, d: &DegreeVector) -> Option<&QSum> {
        self.coeffs.get(d)
    }

    pub fn coeffs(&self) -> &BTreeMap<DegreeVector, QSum> {
        &self.coeffs
    }

    /// Coefficient at an X-degree (requires X grading).
    pub fn x_coeff(&self, delta: &[i64]) -> Option<&QSum> {
        match self.grading {
            Grading::XDegree => self.coeffs.get(&x_key(delta)),
            Grading::Abelian => None,
        }
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.values().map(|c| c.len()).sum()
    }

    /// Replaces the coefficient at `d` (used for negative controls).
    pub fn set_coeff(&mut self, d: DegreeVector, c: QSum) {
        self.coeffs.insert(d, c);
    }

    /// Applies a monomial substitution to every coefficient.
    pub fn substitute(&self, map: &BTreeMap<VarId, Monomial>) -> JSeries {
        let coeffs = self.coeffs.par_iter().map(|(d, c)| (d.clone(), c.substitute(map))).collect();
        JSeries { coeffs, ..self.clone_meta() }
    }

    fn clone_meta(&self) -> JSeries {
        JSeries {
            shape: self.shape.clone(),
            variant: self.variant,
            bound: self.bound,
            grading: self.grading,
            ops: self.ops.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    /// Sums coefficients with equal per-level totals.
    pub fn regroup_by_x_degree(&self) -> Result<JSeries, JSeriesError> {
        if self.grading != Grading::Abelian {
            return Err(JSeriesError::Grading("series is already graded by X-degree".into()));
        }
        let mut coeffs: BTreeMap<DegreeVector, QSum> = BTreeMap::new();
        for (d, c) in &self.coeffs {
            coeffs.entry(x_key(&d.x_degree())).or_insert_with(QSum::zero).add_assign(c);
        }
        Ok(JSeries { coeffs, grading: Grading::XDegree, ..self.clone_meta() })
    }
}

/// Applies `op` to every coefficient.
pub fn apply_op(series: &JSeries, op: &DifferenceOp) -> Result<JSeries, JSeriesError> {
    if series.grading != Grading::Abelian {
        return Err(JSeriesError::Grading("operators act on abelian degrees".into()));
    }
    let old = |d: &DegreeVector| series.coeffs.get(d).cloned();
    let coeffs = series.coeffs.par_iter().map(|(d, _)| (d.clone(), op.act(&series.shape, d, old))).collect();
    let mut out = JSeries { coeffs, ..series.clone_meta() };
    out.ops.push(op.clone());
    Ok(out)
}

/// `Λ_{ar} -> 1` for `a <= n` and `y -> 1`, then regrouping by X-degree.
pub fn descend(series: &JSeries) -> Result<JSeries, JSeriesError> {
    if !series.variant.is_y_side() {
        return Err(JSeriesError::Scope(format!("descent needs a series on Y, got {}", series.variant)));
    }
    let n = series.shape.n() as u16;
    let keep = |v: VarId| !(v == VarId::Y || matches!(v, VarId::Lambda(a, _) if a <= n));
    let mut out = series.clone_meta();
    for (d, c) in &series.coeffs {
        let c = c.map_monomials(|m| m.filter(keep));
        if c.terms.iter().any(|t| t.status() == TermStatus::IllDefined) {
            return Err(JSeriesError::IllDefined(format!("a denominator vanishes at degree {d}")));
        }
        out.coeffs.insert(d.clone(), c.prune_zero());
    }
    out.regroup_by_x_degree()
}

/// One transposition test of [`weyl_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylEntry {
    pub degree: Vec<i64>,
    pub level: usize,
    pub swap: (usize, usize),
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylReport {
    pub entries: Vec<WeylEntry>,
    pub pass: bool,
}

fn swap_map(i: usize, a: usize, b: usize) -> BTreeMap<VarId, Monomial> {
    BTreeMap::from([(VarId::p(i, a), Monomial::var(VarId::p(i, b))), (VarId::p(i, b), Monomial::var(VarId::p(i, a)))])
}

/// Tests invariance of every X-degree coefficient under each transposition
/// of the Chern roots of each level.
pub fn weyl_check(series: &JSeries, bound: i64, trials: u32, seed: u64) -> Result<WeylReport, JSeriesError> {
    let grouped = match series.grading {
        Grading::XDegree => series.clone(),
        Grading::Abelian if series.variant.is_y_side() && series.ops.is_empty() => {
            return Err(JSeriesError::Scope("descend a Y-side series before the Weyl check".into()))
        }
        Grading::Abelian => series.regroup_by_x_degree()?,
    };
    let shape = &grouped.shape;
    let mut jobs = Vec::new();
    for (key, c) in &grouped.coeffs {
        let delta: Vec<i64> = key.levels().iter().map(|l| l[0]).collect();
        if delta.iter().sum::<i64>() > bound {
            continue;
        }
        for i in 1..=shape.n() {
            for a in 1..=shape.dim(i) {
                for b in (a + 1)..=shape.dim(i) {
                    jobs.push((delta.clone(), c, i, a, b));
                }
            }
        }
    }
    let entries: Result<Vec<WeylEntry>, JSeriesError> = jobs
        .into_par_iter()
        .enumerate()
        .map(|(k, (delta, c, i, a, b))| {
            let w = c.substitute(&swap_map(i, a, b));
            let pass = qsum_equal(c, &w, degree_hint(c, &w), trials, seed.wrapping_add(k as u64))?;
            Ok(WeylEntry { degree: delta, level: i, swap: (a, b), pass })
        })
        .collect();
    let entries = entries?;
    let pass = entries.iter().all(|e| e.pass);
    Ok(WeylReport { entries, pass })
}

/// Numerator and denominator factor counts for one Chern-root ratio.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalanceEntry {
    pub degree: DegreeVector,
    pub ratio: Monomial,
    pub numerator: u64,
    pub denominator: u64,
}

/// Counts, for each `rho` in `{P_is/P_{i+1,r}} ∪ {P_is/P_ir}`, the factors of
/// the cotangent-twisted coefficient whose monomial is `rho` times powers of
/// `q` and `hbar`.
pub fn cotangent_balance(shape: &FlagShape, bound: i64) -> Vec<BalanceEntry> {
    let n = shape.n();
    let mut ratios = Vec::new();
    for (i, s) in shape.slots() {
        for r in 1..=shape.dim(i + 1) {
            let up = if i < n { VarId::p(i + 1, r) } else { VarId::lambda(n + 1, r) };
            ratios.push(Monomial::from_pairs([(VarId::p(i, s), 1), (up, -1)]));
        }
        for r in (1..=shape.dim(i)).filter(|&r| r != s) {
            ratios.push(Monomial::from_pairs([(VarId::p(i, s), 1), (VarId::p(i, r), -1)]));
        }
    }
    let mut out = Vec::new();
    for d in enumerate_degrees(shape, bound) {
        let t = coefficient(shape, SeriesVariant::Cotangent, &d);
        for rho in &ratios {
            let (mut num, mut den) = (0, 0);
            for (m, e) in t.factors() {
                if &m.filter(|v| v != VarId::Q && v != VarId::HBAR) == rho {
                    if e > 0 {
                        num += e.unsigned_abs();
                    } else {
                        den += e.unsigned_abs();
                    }
                }
            }
            out.push(BalanceEntry { degree: d.clone(), ratio: rho.clone(), numerator: num, denominator: den });
        }
    }
    out
}

/// Whether every `LEVEL(i, l)` coefficient is the `X_SMALL` coefficient times
/// the level monomial, as factored terms.
pub fn level_matches_x_small(shape: &FlagShape, i: usize, l: i64, bound: i64) -> Result<bool, JSeriesError> {
    let lv = build(shape, SeriesVariant::Level { i, l }, bound)?;
    let xs = build(shape, SeriesVariant::XSmall, bound)?;
    Ok(xs.coeffs.iter().all(|(d, c)| {
        let m = crate::level_monomial(shape, i, l, d);
        let expect: Vec<_> = c
            .terms
            .iter()
            .map(|t| {
                let mut t = t.clone();
                t.mul_monomial(&m);
                t
            })
            .collect();
        lv.coeffs.get(d).map(|x| x.terms == expect).unwrap_or(false)
    }))
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    degree: DegreeVector,
    terms: QSum,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    shape: FlagShape,
    variant: SeriesVariant,
    bound: i64,
    grading: Grading,
    ops: Vec<DifferenceOp>,
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for JSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SeriesRepr {
            shape: self.shape.clone(),
            variant: self.variant,
            bound: self.bound,
            grading: self.grading,
            ops: self.ops.clone(),
            coeffs: self.coeffs.iter().map(|(d, c)| CoeffEntry { degree: d.clone(), terms: c.clone() }).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = SeriesRepr::deserialize(d)?;
        Ok(JSeries {
            shape: r.shape,
            variant: r.variant,
            bound: r.bound,
            grading: r.grading,
            ops: r.ops,
            coeffs: r.coeffs.into_iter().map(|e| (e.degree, e.terms)).collect(),
        })
    }
}
