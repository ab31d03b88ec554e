//! Truncated Laurent expansions in `t`, where the expansion variable equals
//! `center * (1 + t)`.

use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::rational::{self, Rational};
use crate::{FactoredTerm, QSum, Specialization, TermStatus, VarId};

/// `sum_{k=val}^{prec-1} c_k t^k + O(t^prec)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSeries {
    pub center: Rational,
    val: i64,
    coeffs: Vec<Rational>,
}

impl LocalSeries {
    pub fn new(center: Rational, val: i64, coeffs: Vec<Rational>) -> Self {
        LocalSeries { center, val, coeffs }
    }

    /// `O(t^prec)`: nothing known below `prec` except that it vanishes.
    pub fn unknown(center: Rational, prec: i64) -> Self {
        LocalSeries { center, val: prec, coeffs: Vec::new() }
    }

    /// First index that is not exactly known.
    pub fn precision(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    /// Lowest index carried in the window.
    pub fn start(&self) -> i64 {
        self.val
    }

    pub fn coeff(&self, k: i64) -> Result<Rational> {
        if k < self.val {
            return Ok(Rational::zero());
        }
        if k >= self.precision() {
            return Err(CoreError::InsufficientPrecision(format!(
                "coefficient t^{k} requested, series known below t^{}",
                self.precision()
            )));
        }
        Ok(self.coeffs[(k - self.val) as usize].clone())
    }

    /// Order of the first nonzero coefficient, if one is known.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|p| self.val + p as i64)
    }

    fn normalized(&self) -> LocalSeries {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(p) => {
                LocalSeries { center: self.center.clone(), val: self.val + p as i64, coeffs: self.coeffs[p..].to_vec() }
            }
            None => LocalSeries::unknown(self.center.clone(), self.precision()),
        }
    }

    pub fn truncate(&self, prec: i64) -> LocalSeries {
        if prec >= self.precision() {
            return self.clone();
        }
        if prec <= self.val {
            return LocalSeries::unknown(self.center.clone(), prec);
        }
        LocalSeries {
            center: self.center.clone(),
            val: self.val,
            coeffs: self.coeffs[..(prec - self.val) as usize].to_vec(),
        }
    }

    fn check_center(&self, other: &LocalSeries) {
        assert_eq!(self.center, other.center, "series expanded at different centers");
    }

    pub fn add(&self, other: &LocalSeries) -> LocalSeries {
        self.check_center(other);
        let prec = self.precision().min(other.precision());
        let val = self.val.min(other.val).min(prec);
        let coeffs = (val..prec).map(|k| self.coeff(k).unwrap() + other.coeff(k).unwrap()).collect();
        LocalSeries { center: self.center.clone(), val, coeffs }
    }

    pub fn neg(&self) -> LocalSeries {
        LocalSeries { center: self.center.clone(), val: self.val, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn scale(&self, c: &Rational) -> LocalSeries {
        LocalSeries { center: self.center.clone(), val: self.val, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &LocalSeries) -> LocalSeries {
        self.check_center(other);
        let a = self.normalized();
        let b = other.normalized();
        let rel = a.coeffs.len().min(b.coeffs.len());
        let coeffs = unit_mul(&a.coeffs[..rel], &b.coeffs[..rel], rel);
        let val = a.val + b.val;
        if rel == 0 {
            let prec = (a.val + b.precision()).min(b.val + a.precision());
            return LocalSeries::unknown(self.center.clone(), prec);
        }
        LocalSeries { center: self.center.clone(), val, coeffs }
    }

    /// Inverse; the precision drops to `prec - 2 * valuation`.
    pub fn inv(&self) -> Result<LocalSeries> {
        let a = self.normalized();
        if a.coeffs.is_empty() {
            return Err(CoreError::InsufficientPrecision(
                "cannot invert a series with no known nonzero coefficient".into(),
            ));
        }
        let coeffs = unit_inv(&a.coeffs, a.coeffs.len());
        Ok(LocalSeries { center: self.center.clone(), val: -a.val, coeffs })
    }
}

fn unit_mul(a: &[Rational], b: &[Rational], r: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); r];
    for (i, x) in a.iter().enumerate().take(r) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(r - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn unit_inv(a: &[Rational], r: usize) -> Vec<Rational> {
    let inv0 = a[0].recip();
    let mut out = vec![Rational::zero(); r];
    if r == 0 {
        return out;
    }
    out[0] = inv0.clone();
    for k in 1..r {
        let mut acc = Rational::zero();
        for j in 1..=k.min(a.len() - 1) {
            acc += &a[j] * &out[k - j];
        }
        out[k] = -acc * &inv0;
    }
    out
}

fn unit_pow(a: &[Rational], e: i64, r: usize) -> Vec<Rational> {
    let base = if e < 0 { unit_inv(a, r) } else { a[..r.min(a.len())].to_vec() };
    let mut k = e.unsigned_abs();
    let mut acc = vec![Rational::zero(); r];
    if r > 0 {
        acc[0] = Rational::one();
    }
    let mut b = base;
    b.resize(r, Rational::zero());
    while k > 0 {
        if k & 1 == 1 {
            acc = unit_mul(&acc, &b, r);
        }
        k >>= 1;
        if k > 0 {
            b = unit_mul(&b, &b, r);
        }
    }
    acc
}

/// Coefficients of `(1 + t)^k` up to `t^(r-1)`.
fn binomial_series(k: i64, r: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(r);
    let mut c = Rational::one();
    for j in 0..r as i64 {
        out.push(c.clone());
        c = c * rational::int(k - j) / rational::int(j + 1);
    }
    out
}

struct Prepared {
    /// `(a, k)` for the lead `a (1+t)^k`
    lead: (Rational, i64),
    /// (a, k, e) for the factor `(1 - a (1+t)^k)^e`
    factors: Vec<(Rational, i64, i64)>,
    valuation: i64,
}

fn prepare(t: &FactoredTerm, var: VarId, center: &Rational, s: &Specialization) -> Result<Option<Prepared>> {
    match t.status() {
        TermStatus::Zero => return Ok(None),
        TermStatus::IllDefined => return Err(CoreError::IllDefined(format!("literal (1-1) in a denominator: {t}"))),
        TermStatus::Regular => {}
    }
    if t.scalar.is_zero() {
        return Ok(None);
    }
    let resolve = |m| -> Result<(Rational, i64)> {
        let (k, rest) = s.resolve(m).split(var);
        Ok((s.eval_monomial(&rest)? * rational::pow(center, k), k))
    };
    let (la, lk) = resolve(&t.lead)?;
    let mut factors = Vec::with_capacity(t.num_factors());
    let mut valuation = 0;
    for (m, e) in t.factors() {
        let (a, k) = resolve(m)?;
        if a.is_one() {
            if k == 0 {
                if e > 0 {
                    return Ok(None);
                }
                return Err(CoreError::IllDefined(format!("factor (1-{m}) vanishes identically in a denominator")));
            }
            valuation += e;
        }
        factors.push((a, k, e));
    }
    Ok(Some(Prepared { lead: (t.scalar.clone() * la, lk), factors, valuation }))
}

fn expand_prepared(p: &Prepared, center: &Rational, prec: i64) -> LocalSeries {
    let r = prec - p.valuation;
    if r <= 0 {
        return LocalSeries::unknown(center.clone(), prec);
    }
    let r = r as usize;
    let (a, k) = &p.lead;
    let mut acc: Vec<Rational> = binomial_series(*k, r).into_iter().map(|c| c * a).collect();
    for (a, k, e) in &p.factors {
        let b = binomial_series(*k, r + 1);
        let unit: Vec<Rational> = if a.is_one() {
            // 1 - (1+t)^k = -t * (k + C(k,2) t + ...)
            b[1..].iter().map(|c| -c).collect()
        } else {
            let mut u: Vec<Rational> = b[..r].iter().map(|c| -(c * a)).collect();
            u[0] += Rational::one();
            u
        };
        acc = unit_mul(&acc, &unit_pow(&unit, *e, r), r);
    }
    LocalSeries { center: center.clone(), val: p.valuation, coeffs: acc }
}

/// Valuation of a single term at `var = center`; `None` for a term that is
/// identically zero.
pub fn term_valuation(t: &FactoredTerm, var: VarId, center: &Rational, s: &Specialization) -> Result<Option<i64>> {
    Ok(prepare(t, var, center, s)?.map(|p| p.valuation))
}

/// Expansion of one term, exact below `t^prec`.
pub fn expand_term(
    t: &FactoredTerm,
    var: VarId,
    center: &Rational,
    s: &Specialization,
    prec: i64,
) -> Result<Option<LocalSeries>> {
    Ok(prepare(t, var, center, s)?.map(|p| expand_prepared(&p, center, prec)))
}

/// Expansion of `sum` in `var` around `center` on the window `t^{-K} .. t^{M}`.
pub fn local_expand_in(
    sum: &QSum,
    var: VarId,
    center: &Rational,
    s: &Specialization,
    window: (i64, i64),
) -> Result<LocalSeries> {
    if center.is_zero() {
        return Err(CoreError::IllDefined("expansion center must be nonzero".into()));
    }
    let (k, m) = window;
    let prec = m + 1;
    let mut coeffs = vec![Rational::zero(); (prec + k).max(0) as usize];
    for t in &sum.terms {
        let Some(p) = prepare(t, var, center, s)? else { continue };
        if p.valuation < -k {
            return Err(CoreError::WindowTooSmall { order: -p.valuation, window: k });
        }
        let e = expand_prepared(&p, center, prec);
        for idx in e.start()..e.precision() {
            coeffs[(idx + k) as usize] += e.coeff(idx)?;
        }
    }
    Ok(LocalSeries { center: center.clone(), val: -k, coeffs })
}

/// Expansion in `q` around `q0`.
pub fn local_expand(sum: &QSum, q0: &Rational, s: &Specialization, window: (i64, i64)) -> Result<LocalSeries> {
    local_expand_in(sum, VarId::Q, q0, s, window)
}

/// Largest term-level pole order (0 if no term has a pole).
pub fn max_pole_order(sum: &QSum, var: VarId, center: &Rational, s: &Specialization) -> Result<i64> {
    let mut k = 0;
    for t in &sum.terms {
        if let Some(v) = term_valuation(t, var, center, s)? {
            k = k.max(-v);
        }
    }
    Ok(k)
}

/// `Res_{q = q0} sum dq/q` and the pole order of the summed expansion.
pub fn residue_dq_over_q(sum: &QSum, q0: &Rational, s: &Specialization) -> Result<(Rational, i64)> {
    residue_dq_over_q_in(sum, VarId::Q, q0, s)
}

pub fn residue_dq_over_q_in(sum: &QSum, var: VarId, center: &Rational, s: &Specialization) -> Result<(Rational, i64)> {
    let k = max_pole_order(sum, var, center, s)?;
    if k == 0 {
        return Ok((Rational::zero(), 0));
    }
    let e = local_expand_in(sum, var, center, s, (k, -1))?;
    // dq/q = dt/(1+t)
    let mut res = Rational::zero();
    for j in 0..k {
        let c = e.coeff(-1 - j)?;
        if j % 2 == 0 {
            res += c;
        } else {
            res -= c;
        }
    }
    let order = e.valuation().map(|v| -v).unwrap_or(0).max(0);
    Ok((res, order))
}

/// Value of `sum` at `var = center` computed through the expansion, so that
/// removable singularities of individual terms are handled. `None` when the
/// summed expansion has a genuine pole.
pub fn limit_in(sum: &QSum, var: VarId, center: &Rational, s: &Specialization) -> Result<Option<Rational>> {
    let k = max_pole_order(sum, var, center, s)?;
    let e = local_expand_in(sum, var, center, s, (k, 0))?;
    if let Some(v) = e.valuation() {
        if v < 0 {
            return Ok(None);
        }
    }
    Ok(Some(e.coeff(0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::Monomial;

    /// `(1 - mu q)^(-power)`
    fn inv_lin(power: i64) -> FactoredTerm {
        FactoredTerm::binomial(Monomial::from_pairs([(VarId::Q, 1), (VarId::MU, 1)]), -power)
    }

    fn spec_mu(c: Rational) -> Specialization {
        Specialization::new().with(VarId::MU, c).unwrap()
    }

    #[test]
    fn simple_pole_expansion() {
        let s = spec_mu(rat(2, 3));
        let sum: QSum = inv_lin(1).into();
        let e = local_expand(&sum, &rat(3, 2), &s, (2, 2)).unwrap();
        assert_eq!(e.valuation(), Some(-1));
        assert_eq!(e.coeff(-1).unwrap(), int(-1));
        assert!(e.coeff(3).is_err());
    }

    #[test]
    fn zero_of_order_one() {
        let sum: QSum = FactoredTerm::binomial(Monomial::var(VarId::Q), 1).into();
        let e = local_expand(&sum, &int(1), &Specialization::new(), (0, 3)).unwrap();
        assert_eq!(e.valuation(), Some(1));
        assert_eq!(e.coeff(1).unwrap(), int(-1));
    }

    #[test]
    fn window_too_small() {
        let sum: QSum = FactoredTerm::binomial(Monomial::var(VarId::Q), -2).into();
        let e = local_expand(&sum, &int(1), &Specialization::new(), (1, 1));
        assert_eq!(e, Err(CoreError::WindowTooSmall { order: 2, window: 1 }));
        let e = local_expand(&sum, &int(1), &Specialization::new(), (2, 1)).unwrap();
        assert_eq!(e.valuation(), Some(-2));
    }

    #[test]
    fn residue_examples() {
        let s =
            Specialization::new().with(VarId::lambda(2, 1), int(2)).unwrap().with(VarId::lambda(2, 2), int(3)).unwrap();
        let m = Monomial::from_pairs([(VarId::lambda(2, 1), 1), (VarId::lambda(2, 2), -1), (VarId::Q, 1)]);
        let sum: QSum = FactoredTerm::binomial(m, -1).into();
        assert_eq!(residue_dq_over_q(&sum, &rat(3, 2), &s).unwrap(), (int(-1), 1));
        assert_eq!(residue_dq_over_q(&sum, &rat(5, 2), &s).unwrap(), (int(0), 0));
    }

    #[test]
    fn cancelling_double_poles() {
        let s = spec_mu(rat(2, 3));
        let mut sum: QSum = inv_lin(1).into();
        sum.push(inv_lin(2));
        let mut neg = inv_lin(2);
        neg.scale(&int(-1));
        sum.push(neg);
        assert_eq!(residue_dq_over_q(&sum, &rat(3, 2), &s).unwrap(), (int(-1), 1));
    }

    #[test]
    fn limit_through_removable_singularity() {
        // (1 - q^2) / (1 - q) at q = 1 is 2
        let mut t = FactoredTerm::binomial(Monomial::var_pow(VarId::Q, 2), 1);
        t.mul_factor(Monomial::var(VarId::Q), -1);
        let sum: QSum = t.into();
        assert_eq!(limit_in(&sum, VarId::Q, &int(1), &Specialization::new()).unwrap(), Some(int(2)));
    }

    #[test]
    fn series_arithmetic() {
        let c = int(1);
        let a = LocalSeries::new(c.clone(), -1, vec![int(1), int(2), int(3)]);
        let b = a.inv().unwrap();
        assert_eq!(b.start(), 1);
        assert_eq!(b.precision(), 4);
        let one = a.mul(&b);
        assert_eq!(one.coeff(0).unwrap(), int(1));
        assert_eq!(one.coeff(1).unwrap(), int(0));
        assert_eq!(one.coeff(2).unwrap(), int(0));
        assert!(one.coeff(3).is_err());
        let sum = a.add(&b);
        assert_eq!(sum.precision(), 2);
    }
}
