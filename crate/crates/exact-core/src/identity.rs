//! Identity testing for `QSum`s.
//!
//! `qsum_equal` is a randomized test. Clearing denominators turns `a - b`
//! into a Laurent polynomial; multiplying by a monomial makes it a polynomial
//! `N` of total degree at most `D` (the `degree_hint`). Each coordinate is
//! drawn from the `2^17` nonzero integers in `[-2^16, 2^16]`, so if `N != 0`
//! a single trial misses it with probability at most `D / 2^17`, and all
//! `trials` miss with probability at most `(D / 2^17)^trials`. Points where
//! a factor `1 - m` vanishes are rejected and redrawn, which only conditions
//! away a set of density at most (number of factors) / 2^17.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::rational::{self, Rational};
use crate::{eval_sum_in, EvalResult, Monomial, QSum, Specialization, TermStatus, VarId};

pub const SAMPLE_RADIUS: i64 = 1 << 16;
pub const MAX_REJECTIONS: usize = 64;

/// Upper bound on the probability that `qsum_equal` wrongly returns true.
pub fn failure_bound(degree_hint: u64, trials: u32) -> Rational {
    let p = rational::rat(degree_hint as i64, 2 * SAMPLE_RADIUS);
    rational::pow(&p.min(Rational::one()), trials as i64)
}

/// Crude bound on the total degree of the cleared numerator of `a - b`.
pub fn degree_hint(a: &QSum, b: &QSum) -> u64 {
    let mono = |m: &Monomial| m.iter().map(|(_, e)| e.unsigned_abs()).sum::<u64>();
    let term =
        |t: &crate::FactoredTerm| mono(&t.lead) + t.factors().map(|(m, e)| e.unsigned_abs() * mono(m)).sum::<u64>();
    a.terms.iter().chain(&b.terms).map(term).sum::<u64>().max(1)
}

/// A nonzero integer in `[-SAMPLE_RADIUS, SAMPLE_RADIUS]`.
pub fn sample_nonzero(rng: &mut impl Rng) -> Rational {
    let x: i64 = rng.gen_range(1..=SAMPLE_RADIUS);
    let x = if rng.gen_bool(0.5) { -x } else { x };
    rational::int(x)
}

/// True when some factor of some live term evaluates to exactly 1 - 1.
fn hits_factor_zero(sum: &QSum, s: &Specialization) -> Result<bool> {
    for t in &sum.terms {
        if t.status() != TermStatus::Regular {
            continue;
        }
        for (m, _) in t.factors() {
            if s.eval_monomial(m)?.is_one() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Draws values for every variable of `sum` not fixed by `base`, rejecting
/// points where any factor vanishes.
pub fn sample_point(sum: &QSum, base: &Specialization, rng: &mut impl Rng) -> Result<Specialization> {
    let free = base.unbound(&sum.variables());
    for _ in 0..MAX_REJECTIONS {
        let mut s = base.clone();
        for v in &free {
            s.set(*v, sample_nonzero(rng))?;
        }
        if !hits_factor_zero(sum, &s)? {
            return Ok(s);
        }
    }
    Err(CoreError::RejectionExhausted(MAX_REJECTIONS))
}

/// Randomized identity test over all variables (including `q`).
pub fn qsum_equal(a: &QSum, b: &QSum, degree_hint: u64, trials: u32, rng_seed: u64) -> Result<bool> {
    let _ = degree_hint;
    qsum_equal_under(a, b, &Specialization::new(), trials, rng_seed)
}

/// As [`qsum_equal`], keeping the variables fixed by `base`.
pub fn qsum_equal_under(a: &QSum, b: &QSum, base: &Specialization, trials: u32, rng_seed: u64) -> Result<bool> {
    let diff = a.sub(b);
    if diff.has_ill_defined() {
        return Err(CoreError::IllDefined("identity test on an ill-defined sum".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    for _ in 0..trials.max(1) {
        let s = sample_point(&diff, base, &mut rng)?;
        // q is an ordinary variable here; it is already bound in `s`
        let q = s.value(VarId::Q).cloned().unwrap_or_else(Rational::one);
        match eval_sum_in(&diff, VarId::Q, &q, &s)? {
            EvalResult::Zero => {}
            EvalResult::Value(_) => return Ok(false),
            EvalResult::Pole => return Err(CoreError::IllDefined("pole at an admissible sample point".into())),
        }
    }
    Ok(true)
}

pub type LaurentPoly = BTreeMap<Monomial, Rational>;

fn poly_mul(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mut out = LaurentPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = ma.mul(mb);
            let c = ca * cb;
            let slot = out.entry(m).or_insert_with(Rational::zero);
            *slot += c;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn one_minus_pow(m: &Monomial, k: i64, cache: &mut BTreeMap<(Monomial, i64), LaurentPoly>) -> LaurentPoly {
    if let Some(p) = cache.get(&(m.clone(), k)) {
        return p.clone();
    }
    let mut base = LaurentPoly::new();
    base.insert(Monomial::one(), Rational::one());
    let slot = base.entry(m.clone()).or_insert_with(Rational::zero);
    *slot -= Rational::one();
    base.retain(|_, c| !c.is_zero());
    let mut acc = LaurentPoly::new();
    acc.insert(Monomial::one(), Rational::one());
    for _ in 0..k {
        acc = poly_mul(&acc, &base);
    }
    cache.insert((m.clone(), k), acc.clone());
    acc
}

/// Numerator of `sum` over the common denominator `prod (1 - m)^{dmax_m}`.
/// Returns `None` once any intermediate exceeds `max_terms` monomials.
pub fn common_numerator(sum: &QSum, max_terms: usize) -> Result<Option<LaurentPoly>> {
    if sum.has_ill_defined() {
        return Err(CoreError::IllDefined("expansion of an ill-defined sum".into()));
    }
    let live: Vec<_> = sum.terms.iter().filter(|t| !t.is_zero()).collect();
    let mut dmax: BTreeMap<Monomial, i64> = BTreeMap::new();
    for t in &live {
        for (m, e) in t.factors() {
            if e < 0 {
                let slot = dmax.entry(m.clone()).or_insert(0);
                *slot = (*slot).max(-e);
            }
        }
    }
    let mut cache = BTreeMap::new();
    let mut total = LaurentPoly::new();
    for t in live {
        let mut exps: BTreeMap<Monomial, i64> = dmax.clone();
        for (m, e) in t.factors() {
            *exps.entry(m.clone()).or_insert(0) += e;
        }
        let mut p = LaurentPoly::new();
        p.insert(t.lead.clone(), t.scalar.clone());
        for (m, k) in exps {
            if k == 0 {
                continue;
            }
            p = poly_mul(&p, &one_minus_pow(&m, k, &mut cache));
            if p.len() > max_terms {
                return Ok(None);
            }
        }
        for (m, c) in p {
            let slot = total.entry(m).or_insert_with(Rational::zero);
            *slot += c;
        }
        total.retain(|_, c| !c.is_zero());
        if total.len() > max_terms {
            return Ok(None);
        }
    }
    Ok(Some(total))
}

/// Deterministic identity test by full expansion; `None` if too large.
pub fn exact_equal(a: &QSum, b: &QSum, max_terms: usize) -> Result<Option<bool>> {
    Ok(common_numerator(&a.sub(b), max_terms)?.map(|p| p.is_empty()))
}

/// Variables that occur in either sum.
pub fn scope(a: &QSum, b: &QSum) -> BTreeSet<VarId> {
    let mut s = a.variables();
    s.extend(b.variables());
    s
}
