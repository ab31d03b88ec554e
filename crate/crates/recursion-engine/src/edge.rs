use exact_core::rational::rat;
use exact_core::{FactoredTerm, Monomial};
use flag_geometry::{twist_roots, tx_roots, ty_roots, ChernRoot};

use crate::{OrbitDatum, RecursionError, Side};

/// Signed weights of `H^0 - H^1` of the pullback of a line bundle with
/// restrictions `chi_a`, `chi_b` along an orbit with `u = λ^{1/m}`.
///
/// With `k = -m δ` (`chi_b = λ^δ chi_a`): `k >= 0` gives `chi_a u^{-l}`,
/// `l = 0..=k`; `k = -1` gives nothing; `k <= -2` gives `-chi_a u^j`,
/// `j = 1..-k`.
pub fn pushforward(chi_a: &Monomial, chi_b: &Monomial, u: &Monomial) -> Result<Vec<(Monomial, i32)>, RecursionError> {
    let k = -chi_b
        .div(chi_a)
        .log_base(u)
        .ok_or_else(|| RecursionError::Invalid(format!("{chi_b} / {chi_a} is not a power of {u}")))?;
    Ok(if k >= 0 {
        (0..=k).map(|l| (chi_a.mul(&u.pow(-l)), 1)).collect()
    } else {
        (1..-k).map(|j| (chi_a.mul(&u.pow(j)), -1)).collect()
    })
}

/// [`pushforward`] of a class given by its Chern-root monomial.
pub fn pushforward_weights(chi: &Monomial, orbit: &OrbitDatum) -> Result<Vec<(Monomial, i32)>, RecursionError> {
    let ca = chi.substitute(&orbit.restriction_a());
    let cb = chi.substitute(&orbit.restriction_b());
    pushforward(&ca, &cb, &orbit.root())
}

/// `Eu(a) / Eu(pushforward)` over a signed root list, trivial weights
/// skipped and counted.
#[derive(Clone, Debug)]
pub struct EulerRatio {
    pub term: FactoredTerm,
    /// Net signed count of trivial weights at `a`.
    pub trivial_a: i64,
    /// Net signed count of trivial weights of the pushforward.
    pub trivial_phi: i64,
}

fn eu_factor(t: &mut FactoredTerm, w: &Monomial, e: i64) {
    t.mul_factor(w.inv(), e);
}

pub fn euler_ratio(orbit: &OrbitDatum, roots: &[ChernRoot]) -> Result<EulerRatio, RecursionError> {
    let ra = orbit.restriction_a();
    let rb = orbit.restriction_b();
    let u = orbit.root();
    let mut term = FactoredTerm::one();
    let (mut ta, mut tp) = (0i64, 0i64);
    for root in roots {
        let sign = root.sign as i64;
        let ca = root.chr.substitute(&ra);
        let cb = root.chr.substitute(&rb);
        if ca.is_one() {
            ta += sign;
        } else {
            eu_factor(&mut term, &ca, sign);
        }
        for (w, s2) in pushforward(&ca, &cb, &u)? {
            let e = sign * s2 as i64;
            if w.is_one() {
                tp += e;
            } else {
                eu_factor(&mut term, &w, -e);
            }
        }
    }
    Ok(EulerRatio { term, trivial_a: ta, trivial_phi: tp })
}

/// Tangent roots of the orbit's side.
pub fn tangent_roots(orbit: &OrbitDatum) -> Vec<ChernRoot> {
    match orbit.side {
        Side::X => tx_roots(&orbit.shape),
        Side::Y => ty_roots(&orbit.shape),
    }
}

/// Edge coefficient with its trivial-weight bookkeeping left to the caller:
/// `(1/m) Eu(T_a)/Eu(T_phi)`, times `Eu(twist_phi)/Eu(twist_a)` if twisted.
/// The global reparametrization weight is not removed here.
pub fn edge_raw(
    orbit: &OrbitDatum,
    twisted: bool,
) -> Result<(FactoredTerm, EulerRatio, Option<EulerRatio>), RecursionError> {
    let tan = euler_ratio(orbit, &tangent_roots(orbit))?;
    let mut t = tan.term.clone();
    t.scale(&rat(1, orbit.m as i64));
    let tw = if twisted {
        if orbit.side != Side::Y {
            return Err(RecursionError::Invalid("twisting lives on Y".into()));
        }
        let r = euler_ratio(orbit, &twist_roots(&orbit.shape))?;
        // twisting enters inverted relative to the tangent ratio
        t.mul_assign(&r.term.inv().expect("factored"));
        Some(r)
    } else {
        None
    };
    Ok((t, tan, tw))
}

/// Edge coefficient of an isolated orbit.
pub fn edge_coeff(orbit: &OrbitDatum, twisted: bool) -> Result<FactoredTerm, RecursionError> {
    let (t, tan, tw) = edge_raw(orbit, twisted)?;
    if tan.trivial_a != 0 {
        return Err(RecursionError::ZeroDenominator(format!("{} trivial weights at a", tan.trivial_a)));
    }
    match tan.trivial_phi - 1 {
        0 => {}
        k if k < 0 => return Err(RecursionError::NoTrivialWeight),
        k => return Err(RecursionError::ZeroDenominator(format!("{k} extra trivial weights on the orbit"))),
    }
    if let Some(tw) = tw {
        if tw.trivial_a != 0 || tw.trivial_phi != 0 {
            return Err(RecursionError::ZeroDenominator("trivial twisting weight".into()));
        }
    }
    Ok(t)
}
