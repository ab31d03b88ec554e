use exact_core::rational::{int, rat};
use exact_core::{
    eval_sum, residue_dq_over_q_in, EvalResult, FactoredTerm, Monomial, QSum, Rational, Specialization, VarId,
};
use flag_geometry::{fixed_points_x, lambda_top, tangent_chars_x, x_restriction, FlagShape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::SuiteError;

/// `<F, G>` on a flag variety, with `F`, `G` given in the Chern roots
/// `P_is` and the characters `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingQuery {
    pub shape: FlagShape,
    pub f: QSum,
    pub g: QSum,
}

/// Fixed-point sum `sum_a F|_a G|_a / prod_{χ ∈ T_a X} (1 - χ^{-1})`, kept
/// symbolic in `Λ`.
pub fn pairing(query: &PairingQuery) -> QSum {
    let shape = &query.shape;
    let fg = query.f.mul(&query.g);
    let mut out = QSum::zero();
    for a in fixed_points_x(shape) {
        let mut eu = FactoredTerm::one();
        for c in tangent_chars_x(shape, &a) {
            eu.mul_factor(c.chr.inv(), -1);
        }
        out.add_assign(&fg.substitute(&x_restriction(shape, &a)).mul_term(&eu));
    }
    out
}

fn generic_lambda(shape: &FlagShape, rng: &mut impl Rng) -> Result<Specialization, SuiteError> {
    loop {
        let mut s = Specialization::new();
        let mut seen = Vec::new();
        for r in 1..=shape.ambient() {
            let x = rat(rng.gen_range(1..=1000), rng.gen_range(1..=1000));
            seen.push(x.clone());
            s.set(VarId::lambda(shape.n() + 1, r), x)?;
        }
        seen.sort();
        seen.dedup();
        if seen.len() == shape.ambient() {
            return Ok(s);
        }
    }
}

/// [`pairing`] at a generic rational point.
pub fn pairing_value(query: &PairingQuery, seed: u64) -> Result<Rational, SuiteError> {
    let sum = pairing(query);
    let s = generic_lambda(&query.shape, &mut ChaCha8Rng::seed_from_u64(seed))?;
    match eval_sum(&sum, &int(1), &s)? {
        EvalResult::Value(x) => Ok(x),
        EvalResult::Zero => Ok(int(0)),
        EvalResult::Pole => Err(SuiteError::Invalid("pole at a generic point".into())),
    }
}

/// `χ(P^{N-1}, F(P))` through the residue form
/// `(-1)^{v} / v! * sum_r Res_{P = Λ_r} F(P) / prod_t (1 - P/Λ_t) dP/P`
/// with `v = 1`, at a generic point. `f` is a Laurent polynomial in `P_11`.
pub fn p1_residue_pairing(shape: &FlagShape, f: &QSum, seed: u64) -> Result<Rational, SuiteError> {
    if shape.n() != 1 || shape.dim(1) != 1 {
        return Err(SuiteError::Invalid(format!("{shape} is not a projective space")));
    }
    let s = generic_lambda(shape, &mut ChaCha8Rng::seed_from_u64(seed))?;
    let p = Monomial::var(VarId::p(1, 1));
    let mut den = FactoredTerm::one();
    for t in 1..=shape.ambient() {
        den.mul_factor(p.div(&lambda_top(shape, t)), -1);
    }
    let integrand = f.mul_term(&den);
    let mut total = int(0);
    for r in 1..=shape.ambient() {
        let center = s.eval_monomial(&lambda_top(shape, r))?;
        total += residue_dq_over_q_in(&integrand, VarId::p(1, 1), &center, &s)?.0;
    }
    // (-1)^{v_1} / v_1!
    Ok(-total)
}
