use std::collections::BTreeMap;

use exact_core::rational::{int, rat};
use exact_core::{eval_sum, qsum_equal, EvalResult, FactoredTerm, Monomial, QSum, Rational, Specialization, VarId};
use flag_geometry::{enumerate_degrees, enumerate_x_degrees, fixed_points_x, x_restriction, FixedPointX, FlagShape};
use j_series::{level_monomial, x_small};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::SuiteError;

/// The dual flag variety; its torus characters are the inverses of the
/// original ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualShape {
    pub shape: FlagShape,
    pub inverted_lambda: bool,
}

pub fn dual_shape(shape: &FlagShape) -> DualShape {
    DualShape { shape: shape.dual(), inverted_lambda: true }
}

/// `S'_j = [N] \ S_{n+1-j}`, each level extending the previous one.
pub fn perpendicular(shape: &FlagShape, a: &FixedPointX) -> FixedPointX {
    let n = shape.n();
    let dual = shape.dual();
    let mut chain: Vec<Vec<usize>> = Vec::with_capacity(n);
    for j in 1..=n {
        let comp: Vec<usize> = (1..=shape.ambient()).filter(|x| !a.set(n + 1 - j).contains(x)).collect();
        let mut level = chain.last().cloned().unwrap_or_default();
        level.extend(comp.into_iter().filter(|x| !level.contains(x)).collect::<Vec<_>>());
        chain.push(level);
    }
    FixedPointX::new(&dual, chain).expect("complements of a chain form a chain")
}

/// `c * monomial`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioMonomial {
    #[serde(with = "exact_core::rational::serde_str")]
    pub coeff: Rational,
    pub monomial: Monomial,
}

impl RatioMonomial {
    pub fn is_one(&self) -> bool {
        self.coeff == int(1) && self.monomial.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDualityEntry {
    pub point: String,
    pub dual_point: String,
    pub x_degree: Vec<i64>,
    pub ratio: Option<RatioMonomial>,
    /// Set when the ratio is not a monomial, or both sides vanish.
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDualityReport {
    pub shape: FlagShape,
    pub dual: DualShape,
    pub level: usize,
    pub l: i64,
    pub bound: i64,
    pub seed: u64,
    pub entries: Vec<LevelDualityEntry>,
    /// Every ratio is a monomial.
    pub pass: bool,
}

fn q_pow(k: i64) -> Monomial {
    Monomial::var_pow(VarId::Q, k)
}

/// `sum_{d : δ(d) = δ} J_d [prod_s P_is^{d_is} q^{d_is(d_is - 1 + 2 shift)/2}]^l`
/// localized at `a`, where `shift` is 0 or 1.
fn level_side(shape: &FlagShape, i: usize, l: i64, plus: bool, a: &FixedPointX, delta: &[i64], bound: i64) -> QSum {
    let restr = x_restriction(shape, a);
    let mut out = QSum::zero();
    for d in enumerate_degrees(shape, bound).into_iter().filter(|d| d.x_degree() == delta) {
        let mut t = x_small(shape, &d);
        t.mul_monomial(&level_monomial(shape, i, l, &d));
        if plus {
            t.mul_monomial(&q_pow(l * d.x_degree()[i - 1]));
        }
        out.push(t.substitute(&restr));
    }
    out
}

fn invert_lambda(shape: &FlagShape) -> BTreeMap<VarId, Monomial> {
    (1..=shape.ambient())
        .map(|r| {
            let v = VarId::lambda(shape.n() + 1, r);
            (v, Monomial::var_pow(v, -1))
        })
        .collect()
}

fn value(sum: &QSum, q: &Rational, s: &Specialization) -> Option<Rational> {
    match eval_sum(sum, q, s).ok()? {
        EvalResult::Value(x) => Some(x),
        EvalResult::Zero => Some(int(0)),
        EvalResult::Pole => None,
    }
}

/// `e` with `x = 2^e`, if any.
fn log2_exact(x: &Rational) -> Option<i64> {
    if *x <= int(0) {
        return None;
    }
    let pow2 = |n: &exact_core::rational::BigInt| -> Option<i64> {
        let tz = n.trailing_zeros()?;
        (n.bits() == tz + 1).then_some(tz as i64)
    };
    Some(pow2(x.numer())? - pow2(x.denom())?)
}

/// Determines `a/b` as `c * monomial` in `q` and the top characters, by
/// doubling one variable at a time, then confirms `a = c m b` by sampling.
fn monomial_ratio(
    a: &QSum,
    b: &QSum,
    shape: &FlagShape,
    rng: &mut ChaCha8Rng,
) -> Result<Option<RatioMonomial>, SuiteError> {
    let mut vars: Vec<VarId> = (1..=shape.ambient()).map(|r| VarId::lambda(shape.n() + 1, r)).collect();
    vars.push(VarId::Q);
    let draw = |rng: &mut ChaCha8Rng| rat(rng.gen_range(1..=997), rng.gen_range(1..=997));
    let mut base = Specialization::new();
    for v in &vars {
        base.set(*v, draw(rng))?;
    }
    let ratio_at = |s: &Specialization| -> Option<Rational> {
        let q = s.value(VarId::Q).cloned().expect("q set");
        let (x, y) = (value(a, &q, s)?, value(b, &q, s)?);
        (y != int(0)).then(|| x / y)
    };
    let Some(r0) = ratio_at(&base) else { return Ok(None) };
    let mut mono = Monomial::one();
    for v in &vars {
        let mut s = base.clone();
        s.set(*v, base.value(*v).expect("set") * int(2))?;
        let Some(r1) = ratio_at(&s) else { return Ok(None) };
        if r0 == int(0) {
            if r1 != int(0) {
                return Ok(None);
            }
            continue;
        }
        let Some(e) = log2_exact(&(r1 / &r0)) else { return Ok(None) };
        mono.mul_var(*v, e);
    }
    let coeff = &r0 / base.eval_monomial(&mono)?;
    let scaled = b.mul_term(&FactoredTerm::monomial(coeff.clone(), mono.clone()));
    let hint = exact_core::degree_hint(a, &scaled);
    Ok(qsum_equal(a, &scaled, hint, 20, rng.gen())?.then_some(RatioMonomial { coeff, monomial: mono }))
}

/// Compares `LEVEL(i, l)` on `X` at every fixed point `a` with the dual
/// side on `X'` at the perpendicular point: `V'_{n+1-i}` with the factor
/// `[prod_s P'^{d} q^{d(d+1)/2}]^{-l}` and inverted characters, X-degrees
/// matched in reverse order. Records each ratio and whether it is a
/// monomial.
pub fn level_duality_report(
    shape: &FlagShape,
    i: usize,
    l: i64,
    bound: i64,
    seed: u64,
) -> Result<LevelDualityReport, SuiteError> {
    let n = shape.n();
    if i == 0 || i > n {
        return Err(SuiteError::Invalid(format!("level {i} outside 1..={n}")));
    }
    let dual = shape.dual();
    let inv = invert_lambda(&dual);
    let jobs: Vec<(FixedPointX, Vec<i64>)> = fixed_points_x(shape)
        .into_iter()
        .flat_map(|a| enumerate_x_degrees(shape, bound).into_iter().map(move |d| (a.clone(), d)))
        .collect();
    let entries = jobs
        .par_iter()
        .enumerate()
        .map(|(k, (a, delta))| -> Result<LevelDualityEntry, SuiteError> {
            let a2 = perpendicular(shape, a);
            let rev: Vec<i64> = delta.iter().rev().copied().collect();
            let lhs = level_side(shape, i, l, false, a, delta, bound);
            let rhs = level_side(&dual, n + 1 - i, -l, true, &a2, &rev, bound).substitute(&inv);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let both_zero = lhs.is_empty() && rhs.is_empty();
            let ratio = if both_zero { None } else { monomial_ratio(&lhs, &rhs, shape, &mut rng)? };
            let note = match (&ratio, both_zero) {
                (_, true) => Some("both sides vanish".to_string()),
                (None, false) => Some("RATIO_NOT_MONOMIAL".to_string()),
                _ => None,
            };
            Ok(LevelDualityEntry {
                point: a.to_string(),
                dual_point: a2.to_string(),
                x_degree: delta.clone(),
                ratio,
                note,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let pass = entries.iter().all(|e| e.note.as_deref() != Some("RATIO_NOT_MONOMIAL"));
    Ok(LevelDualityReport { shape: shape.clone(), dual: dual_shape(shape), level: i, l, bound, seed, entries, pass })
}
