use std::collections::BTreeMap;

use exact_core::rational::{self, rat};
use exact_core::{eval_sum, limit_in, EvalResult, FactoredTerm, Monomial, QSum, Rational, Specialization, VarId};
use flag_geometry::{enumerate_degrees, enumerate_x_degrees, DegreeVector, FixedPointX, FixedPointY, FlagShape};
use j_series::{build, SeriesVariant};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::verify::one_minus_q;
use crate::{
    coeff_broken, covered, edge_coeff, enumerate_broken, generic_point, localize, FixedPoint, OrbitDatum,
    RecursionError,
};

/// One end degree of the broken-orbit sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingEntry {
    pub end_degree: DegreeVector,
    /// Value at `y = 1`; `None` if some term is singular there.
    pub at_y1: Option<String>,
    /// Value at the sampled `y`.
    pub at_y: Option<String>,
    pub pass: bool,
}

/// One X-degree of the comparison between the Y-side orbit sum and the
/// single X orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionEntry {
    pub x_degree: Vec<i64>,
    /// Number of `(k, d)` pairs contributing on the Y side.
    pub y_terms: usize,
    pub y_side: Option<String>,
    pub x_side: Option<String>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub shape: FlagShape,
    pub m: u32,
    pub bound: i64,
    pub seed: u64,
    pub broken_orbits: usize,
    /// Total Novikov weight of every broken orbit.
    pub novikov_total: i64,
    pub specialization: Specialization,
    /// Integer weights `w` in `C_ar -> alpha^w` for `a <= n`.
    pub alpha_weights: BTreeMap<String, i64>,
    pub vanishing: Vec<VanishingEntry>,
    pub reduction: Vec<ReductionEntry>,
    pub pass: bool,
}

fn set_y_one(sum: &QSum) -> QSum {
    sum.map_monomials(|m| m.filter(|v| v != VarId::Y))
}

fn value_of(sum: &QSum, s: &Specialization) -> Option<Rational> {
    let q = s.value(VarId::Q).cloned().unwrap_or_else(|| rational::int(1));
    match eval_sum(sum, &q, s) {
        Ok(EvalResult::Value(x)) => Some(x),
        Ok(EvalResult::Zero) => Some(rational::int(0)),
        _ => None,
    }
}

fn q_at(u: &Monomial) -> BTreeMap<VarId, Monomial> {
    BTreeMap::from([(VarId::Q, u.clone())])
}

/// `pre * [(1-q) * coeff](q = u)`, term by term so that the factor lists
/// merge before any specialization. `pre` keeps its own `q`.
fn glue(pre: &FactoredTerm, coeff: &QSum, u: &Monomial) -> QSum {
    coeff.mul_term(&one_minus_q()).substitute(&q_at(u)).mul_term(pre)
}

/// Broken-orbit sums on the complete-flag quotient and the comparison of
/// the orbits `A -> E_k` with the X orbit `Λ_2/Λ_1`.
///
/// `bound` truncates degrees at the start point `A`: an end degree `d`
/// enters the broken sum when `|d| + m |D| <= bound`.
pub fn check_vanishing(shape: &FlagShape, m: u32, bound: i64, seed: u64) -> Result<VanishingReport, RecursionError> {
    let n = shape.n();
    if n < 1 || shape.dim(1) < 1 || (1..=n).any(|i| shape.dim(i + 1) < 2) {
        return Err(RecursionError::Invalid(format!("{shape} has no Λ_2/Λ_1 family")));
    }
    let tw = build(shape, SeriesVariant::TwY, bound)?;
    let broken = enumerate_broken(shape);
    let coeffs = broken.iter().map(|b| coeff_broken(shape, b, m)).collect::<Result<Vec<_>, _>>()?;
    let novikov_total = coeffs.iter().map(|c| c.novikov.total()).max().unwrap_or(0);

    // broken sums, one per end degree
    let locals: Vec<_> = coeffs
        .iter()
        .map(|c| tw.substitute(&covered(&FixedPoint::Y(c.end.clone()).restriction(shape), shape, m)))
        .collect();
    let end_degrees: Vec<DegreeVector> =
        if bound >= novikov_total { enumerate_degrees(shape, bound - novikov_total) } else { Vec::new() };
    let sums: Vec<QSum> = end_degrees
        .iter()
        .map(|d| {
            let mut s = QSum::zero();
            for (c, local) in coeffs.iter().zip(&locals) {
                if let Some(j) = local.coeff(d) {
                    s.add_assign(&glue(&c.term, j, &c.u_end));
                }
            }
            s
        })
        .collect();

    // Y-side orbits A -> E_k and the X orbit
    let start = FixedPointY::distinguished(shape);
    let y_orbits = (1..=n).map(|k| OrbitDatum::y_orbit(shape, &start, k, 1, 2, m)).collect::<Result<Vec<_>, _>>()?;
    let y_edges = y_orbits.iter().map(|o| edge_coeff(o, true)).collect::<Result<Vec<_>, _>>()?;
    let y_locals = y_orbits.iter().map(|o| localize(&tw, o, true)).collect::<Result<Vec<_>, _>>()?;
    let xa = FixedPointX::new(shape, (1..=n).map(|i| (1..=shape.dim(i)).collect()).collect())
        .ok_or_else(|| RecursionError::Invalid("standard coordinate flag".into()))?;
    let x_orbit = OrbitDatum::x_orbit(shape, &xa, 1, 1, 2, m)?;
    let x_edge = edge_coeff(&x_orbit, false)?;
    let xs = localize(&build(shape, SeriesVariant::XSmall, bound)?, &x_orbit, true)?;
    let x_root = x_orbit.root();
    let x_shift: Vec<i64> = x_orbit.degree.x_degree().iter().map(|x| x * m as i64).collect();

    let all_degrees = enumerate_degrees(shape, bound);
    let s1_sums: Vec<(Vec<i64>, usize, QSum)> = enumerate_x_degrees(shape, bound)
        .into_iter()
        .map(|delta| {
            let mut s = QSum::zero();
            let mut count = 0;
            for d in all_degrees.iter().filter(|d| d.x_degree() == delta) {
                for (k, o) in y_orbits.iter().enumerate() {
                    let Some(de) = d.checked_sub(&o.degree.scaled(m as i64)) else { continue };
                    if let Some(j) = y_locals[k].coeff(&de) {
                        s.add_assign(&glue(&y_edges[k], j, &o.root()));
                        count += 1;
                    }
                }
            }
            (delta, count, s)
        })
        .collect();

    // one generic point for everything
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut refs: Vec<&QSum> = sums.iter().collect();
    refs.extend(s1_sums.iter().map(|(_, _, s)| s));
    refs.extend(xs.coeffs().values());
    let mut spec = generic_point(&refs, &[&x_edge], std::slice::from_ref(&x_root), &Specialization::new(), rng.gen())?;
    // q stays free in the broken sums
    spec.set(VarId::Q, rat(rng.gen_range(1..=1000), rng.gen_range(1..=1000)))?;
    let mut spec_y1 = spec.clone();
    spec_y1.remove(VarId::Y);

    let vanishing: Vec<VanishingEntry> = end_degrees
        .par_iter()
        .zip(sums.par_iter())
        .map(|(d, s)| {
            let at_y1 = value_of(&set_y_one(s), &spec_y1);
            let at_y = value_of(s, &spec);
            let zero = rational::int(0);
            let pass = at_y1.as_ref() == Some(&zero) && at_y.as_ref().is_some_and(|v| *v != zero);
            VanishingEntry {
                end_degree: d.clone(),
                at_y1: at_y1.map(|v| v.to_string()),
                at_y: at_y.map(|v| v.to_string()),
                pass,
            }
        })
        .collect();

    // C_ar -> alpha^w for a <= n, distinct weights
    let mut pool: Vec<i64> = (1..=64).collect();
    pool.shuffle(&mut rng);
    let mut alpha = BTreeMap::new();
    let mut weights = BTreeMap::new();
    let mut next = pool.into_iter();
    for a in 2..=n {
        for r in 1..=shape.dim(a) {
            let w = next.next().expect("enough weights");
            alpha.insert(VarId::cover(a, r), Monomial::var_pow(VarId::ALPHA, w));
            weights.insert(VarId::cover(a, r).to_string(), w);
        }
    }
    let mut top = Specialization::new();
    for r in 1..=shape.ambient() {
        let v = VarId::cover(n + 1, r);
        top.set(v, spec.value(v).cloned().unwrap_or_else(|| rat(r as i64 + 1, 2)))?;
    }
    let q_star = top.eval_monomial(&x_root)?;
    let x_edge_val = value_of(&QSum::from(x_edge.clone()), &top);

    let reduction: Vec<ReductionEntry> = s1_sums
        .par_iter()
        .map(|(delta, count, s)| {
            let ys = set_y_one(s).substitute(&alpha);
            let y_side = if ys.has_ill_defined() {
                None
            } else {
                limit_in(&ys, VarId::ALPHA, &rational::int(1), &top).ok().flatten()
            };
            let b_deg: Vec<i64> = delta.iter().zip(&x_shift).map(|(a, b)| a - b).collect();
            let x_side = if b_deg.iter().any(|x| *x < 0) {
                Some(rational::int(0))
            } else {
                match xs.x_coeff(&b_deg) {
                    Some(c) => {
                        let f = c.mul_term(&one_minus_q());
                        match (limit_in(&f, VarId::Q, &q_star, &top).ok().flatten(), &x_edge_val) {
                            (Some(v), Some(e)) => Some(v * e),
                            _ => None,
                        }
                    }
                    None => None,
                }
            };
            let pass = y_side.is_some() && y_side == x_side;
            ReductionEntry {
                x_degree: delta.clone(),
                y_terms: *count,
                y_side: y_side.map(|v| v.to_string()),
                x_side: x_side.map(|v| v.to_string()),
                pass,
            }
        })
        .collect();

    let pass = vanishing.iter().all(|e| e.pass) && reduction.iter().all(|e| e.pass);
    Ok(VanishingReport {
        shape: shape.clone(),
        m,
        bound,
        seed,
        broken_orbits: broken.len(),
        novikov_total,
        specialization: spec,
        alpha_weights: weights,
        vanishing,
        reduction,
        pass,
    })
}
