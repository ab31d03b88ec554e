use std::collections::{BTreeMap, BTreeSet};

use exact_core::rational::{self, rat};
use exact_core::{
    eval_term, exact_equal, limit_in, qprod, qsum_equal, residue_dq_over_q, EvalResult, FactoredTerm, Monomial, QSum,
    Rational, Specialization, TermStatus, VarId,
};
use flag_geometry::DegreeVector;
use j_series::{x_key, Grading, JSeries, SeriesVariant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{edge_coeff, pushforward, OrbitDatum, OrbitDescriptor, RecursionError, Side};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionEntry {
    pub degree: DegreeVector,
    #[serde(with = "exact_core::rational::serde_str")]
    pub lhs: Rational,
    /// `None` when the `b`-side coefficient has a pole at `q0`.
    pub rhs: Option<String>,
    pub pole_order: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionReport {
    pub orbit: OrbitDescriptor,
    pub variant: SeriesVariant,
    pub seed: u64,
    pub specialization: Specialization,
    #[serde(with = "exact_core::rational::serde_str")]
    pub q0: Rational,
    pub entries: Vec<RecursionEntry>,
    pub pass: bool,
}

/// Localizes a series at one end of an orbit: restriction to the fixed
/// point in cover variables, regrouped by X-degree on the X side.
pub fn localize(series: &JSeries, orbit: &OrbitDatum, at_b: bool) -> Result<JSeries, RecursionError> {
    let map = if at_b { orbit.restriction_b() } else { orbit.restriction_a() };
    let local = series.substitute(&map);
    Ok(match orbit.side {
        Side::X if local.grading == Grading::Abelian => local.regroup_by_x_degree()?,
        _ => local,
    })
}

fn orbit_key(orbit: &OrbitDatum) -> DegreeVector {
    match orbit.side {
        Side::X => x_key(&orbit.degree.x_degree()),
        Side::Y => orbit.degree.clone(),
    }
}

fn factor_monomials(sums: &[&QSum], extra: &[&FactoredTerm]) -> (BTreeSet<VarId>, Vec<Monomial>) {
    let mut vars = BTreeSet::new();
    let mut ms = BTreeSet::new();
    let all = sums.iter().flat_map(|s| s.terms.iter()).chain(extra.iter().copied());
    for t in all {
        vars.extend(t.variables());
        if t.status() != TermStatus::Regular {
            continue;
        }
        for (m, _) in t.factors() {
            ms.insert(m.clone());
        }
    }
    (vars, ms.into_iter().collect())
}

/// Draws positive rationals `a/b` with `a, b in [1, 1000]` for the free
/// variables (never `q`), redrawing while a `q`-free factor hits 1 or one
/// of `roots` evaluates to 1.
pub fn generic_point(
    sums: &[&QSum],
    extra: &[&FactoredTerm],
    roots: &[Monomial],
    base: &Specialization,
    seed: u64,
) -> Result<Specialization, RecursionError> {
    let (mut vars, ms) = factor_monomials(sums, extra);
    for r in roots {
        vars.extend(r.vars());
    }
    vars.remove(&VarId::Q);
    let free: Vec<VarId> = base.unbound(&vars).into_iter().filter(|v| *v != VarId::Q).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..exact_core::MAX_REJECTIONS {
        let mut s = base.clone();
        for v in &free {
            let (p, q): (i64, i64) = (rng.gen_range(1..=1000), rng.gen_range(1..=1000));
            s.set(*v, rat(p, q))?;
        }
        let bad = ms
            .iter()
            .filter(|m| m.exponent(VarId::Q) == 0)
            .any(|m| s.eval_monomial(m).map(|x| x == rational::int(1)).unwrap_or(false))
            || roots.iter().any(|r| s.eval_monomial(r).map(|x| x == rational::int(1)).unwrap_or(true));
        if !bad {
            return Ok(s);
        }
    }
    Err(exact_core::CoreError::RejectionExhausted(exact_core::MAX_REJECTIONS).into())
}

pub(crate) fn one_minus_q() -> FactoredTerm {
    FactoredTerm::binomial(Monomial::var(VarId::Q), 1)
}

/// Value of an edge coefficient at a point (it carries no `q`).
fn eval_edge(edge: &FactoredTerm, s: &Specialization) -> Result<Rational, RecursionError> {
    match eval_term(edge, &rational::int(1), s)? {
        EvalResult::Value(x) => Ok(x),
        EvalResult::Zero => Ok(rational::int(0)),
        EvalResult::Pole => {
            Err(RecursionError::ZeroDenominator("edge coefficient has a pole at the sample point".into()))
        }
    }
}

/// Checks `Res_{q=q0} (1-q) f_a[d + mD] dq/q = -edge(q0) (1-q) f_b[d](q0)`
/// for every `d` with `|d| + m|D| <= bound`, at `q0 = λ^{1/m}`.
pub fn verify_recursion(
    series: &JSeries,
    orbit: &OrbitDatum,
    bound: i64,
    seed: u64,
) -> Result<RecursionReport, RecursionError> {
    if series.shape != orbit.shape {
        return Err(RecursionError::Invalid("series and orbit live on different shapes".into()));
    }
    if series.variant.is_y_side() != (orbit.side == Side::Y) {
        return Err(RecursionError::Invalid(format!("{} series on a {:?} orbit", series.variant, orbit.side)));
    }
    let twisted = series.variant == SeriesVariant::TwY;
    let edge = edge_coeff(orbit, twisted)?;
    let la = localize(series, orbit, false)?;
    let lb = localize(series, orbit, true)?;
    let shift = orbit_key(orbit).scaled(orbit.m as i64);
    let pairs: Vec<(DegreeVector, DegreeVector)> = lb
        .coeffs()
        .keys()
        .filter(|d| d.total() + shift.total() <= bound)
        .map(|d| (d.clone(), d.add(&shift)))
        .filter(|(_, e)| la.coeff(e).is_some())
        .collect();
    let sums: Vec<&QSum> =
        pairs.iter().flat_map(|(d, e)| [lb.coeff(d).expect("key"), la.coeff(e).expect("key")]).collect();
    let root = orbit.root();
    let spec = generic_point(&sums, &[&edge], std::slice::from_ref(&root), &Specialization::new(), seed)?;
    let q0 = spec.eval_monomial(&root)?;
    let ev = eval_edge(&edge, &spec)?;
    let omq = one_minus_q();
    let entries: Vec<RecursionEntry> = pairs
        .par_iter()
        .map(|(d, e)| -> Result<RecursionEntry, RecursionError> {
            let fa = la.coeff(e).expect("key").mul_term(&omq);
            let fb = lb.coeff(d).expect("key").mul_term(&omq);
            let (lhs, pole_order) = residue_dq_over_q(&fa, &q0, &spec)?;
            let rhs = limit_in(&fb, VarId::Q, &q0, &spec)?.map(|v| -(&ev * v));
            let pass = rhs.as_ref() == Some(&lhs) && pole_order <= 1;
            Ok(RecursionEntry { degree: d.clone(), lhs, rhs: rhs.map(|r| r.to_string()), pole_order, pass })
        })
        .collect::<Result<_, _>>()?;
    let pass = entries.iter().all(|e| e.pass);
    Ok(RecursionReport {
        orbit: orbit.descriptor(),
        variant: series.variant,
        seed,
        specialization: spec,
        q0,
        entries,
        pass,
    })
}

/// The designated `m`-th root of a rational character value.
pub fn designated_root(value: &Rational, m: u32, label: &str) -> Result<Rational, RecursionError> {
    let r = rational::nth_root(value, m).ok_or_else(|| RecursionError::RootNotRational(label.to_string(), m))?;
    Ok(if r < rational::int(0) { -r } else { r })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueEntry {
    pub degree: DegreeVector,
    #[serde(with = "exact_core::rational::serde_str")]
    pub residue: Rational,
    pub pole_order: i64,
}

/// `Res_{q=q0} (1-q) f_a dq/q` per degree for a series localized at a
/// fixed point given by its restriction map, with `q0` the designated
/// `m`-th root of the value of `lambda` under `spec` (`Λ` given directly).
pub fn residue_at(
    series: &JSeries,
    restriction: &BTreeMap<VarId, Monomial>,
    lambda: &Monomial,
    m: u32,
    spec: &Specialization,
) -> Result<(Rational, Vec<ResidueEntry>), RecursionError> {
    let mut local = series.substitute(restriction);
    if !series.variant.is_y_side() {
        local = local.regroup_by_x_degree()?;
    }
    let q0 = designated_root(&spec.eval_monomial(lambda)?, m, &lambda.to_string())?;
    let omq = one_minus_q();
    let entries = local
        .coeffs()
        .par_iter()
        .map(|(d, c)| -> Result<ResidueEntry, RecursionError> {
            let (residue, pole_order) = residue_dq_over_q(&c.mul_term(&omq), &q0, spec)?;
            Ok(ResidueEntry { degree: d.clone(), residue, pole_order })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((q0, entries))
}

/// The per-pair twisting identity along an orbit: with `x = P_is/P_ir` at
/// `a`, `Δ = D_is - D_ir` and `k = d_is - d_ir`,
/// `prod_{l=1}^{k+mΔ}(1 - q^l y x) / prod_{l=1}^{k}(1 - q^l u^{mΔ} y x)` at
/// `q = u` equals `prod_{l=0}^{mΔ}(1 - u^l y x) / (1 - y x)` and the Euler
/// ratio of the pushforward of `y^{-1}/x`. Returns both comparisons.
pub fn gamma_edge_identity(
    i: usize,
    r: usize,
    s: usize,
    m: u32,
    delta: i64,
    k: i64,
    seed: u64,
) -> Result<(bool, bool), RecursionError> {
    let x = Monomial::from_pairs([(VarId::p(i, s), 1), (VarId::p(i, r), -1)]);
    let u = Monomial::var(VarId::cover(i + 1, 1));
    let y = Monomial::var(VarId::Y);
    let yx = y.mul(&x);
    let md = m as i64 * delta;
    let q = Monomial::var(VarId::Q);
    let mut lhs = qprod(1, k + md, |l| yx.mul(&q.pow(l)));
    lhs.mul_assign(&qprod(1, k, |l| yx.mul(&u.pow(md)).mul(&q.pow(l))).inv().expect("factored"));
    let lhs = lhs.substitute(&BTreeMap::from([(VarId::Q, u.clone())]));
    let mut rhs = qprod(0, md, |l| yx.mul(&u.pow(l)));
    rhs.mul_factor(yx.clone(), -1);
    let chi_a = yx.inv();
    let chi_b = chi_a.mul(&u.pow(-md));
    let mut eu = FactoredTerm::one();
    for (w, sign) in pushforward(&chi_a, &chi_b, &u)? {
        eu.mul_factor(w.inv(), sign as i64);
    }
    eu.mul_factor(chi_a.inv(), -1);
    let (l, r1, r2): (QSum, QSum, QSum) = (lhs.into(), rhs.into(), eu.into());
    let by_expansion = exact_equal(&l, &r1, 10_000)?.unwrap_or(false) && exact_equal(&l, &r2, 10_000)?.unwrap_or(false);
    let hint = exact_core::degree_hint(&l, &r1);
    let sampled = qsum_equal(&l, &r1, hint, 20, seed)? && qsum_equal(&l, &r2, hint, 20, seed.wrapping_add(1))?;
    Ok((by_expansion, sampled))
}
