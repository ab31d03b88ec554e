use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::rational::{self, Rational};
use crate::{FactoredTerm, Monomial, QSum, TermStatus, VarId};

/// Values for variables, plus an optional monomial substitution applied first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Specialization {
    values: BTreeMap<VarId, Rational>,
    subst: BTreeMap<VarId, Monomial>,
}

impl Specialization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, v: VarId, value: Rational) -> Result<()> {
        if value.is_zero() {
            return Err(CoreError::ZeroValue(v));
        }
        self.values.insert(v, value);
        Ok(())
    }

    pub fn with(mut self, v: VarId, value: Rational) -> Result<Self> {
        self.set(v, value)?;
        Ok(self)
    }

    pub fn remove(&mut self, v: VarId) {
        self.values.remove(&v);
    }

    pub fn substitute(&mut self, v: VarId, image: Monomial) {
        self.subst.insert(v, image);
    }

    pub fn value(&self, v: VarId) -> Option<&Rational> {
        self.values.get(&v)
    }

    pub fn values(&self) -> &BTreeMap<VarId, Rational> {
        &self.values
    }

    pub fn substitution(&self) -> &BTreeMap<VarId, Monomial> {
        &self.subst
    }

    /// Applies the substitution map (one pass).
    pub fn resolve(&self, m: &Monomial) -> Monomial {
        m.substitute(&self.subst)
    }

    /// Value of a monomial; `extra` supplies a value for one more variable.
    pub fn eval_monomial_with(&self, m: &Monomial, extra: Option<(VarId, &Rational)>) -> Result<Rational> {
        let m = self.resolve(m);
        let mut acc = Rational::one();
        for (v, e) in m.iter() {
            let x = match extra {
                Some((w, x)) if w == v => x,
                _ => self.values.get(&v).ok_or(CoreError::UnboundVariable(v))?,
            };
            acc *= rational::pow(x, e);
        }
        Ok(acc)
    }

    pub fn eval_monomial(&self, m: &Monomial) -> Result<Rational> {
        self.eval_monomial_with(m, None)
    }

    /// Variables of `m` (after substitution) without a value.
    pub fn unbound(&self, vars: &BTreeSet<VarId>) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        for v in vars {
            let img = self.resolve(&Monomial::var(*v));
            for w in img.vars() {
                if !self.values.contains_key(&w) {
                    out.insert(w);
                }
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct SpecRepr {
    values: BTreeMap<String, String>,
    subst: BTreeMap<String, Monomial>,
}

impl Serialize for Specialization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // keep VarId order by serializing through ordered vectors
        use serde::ser::SerializeStruct;
        let values: Vec<(String, String)> = self.values.iter().map(|(v, x)| (v.to_string(), x.to_string())).collect();
        let subst: Vec<(String, &Monomial)> = self.subst.iter().map(|(v, m)| (v.to_string(), m)).collect();
        let mut st = s.serialize_struct("Specialization", 2)?;
        st.serialize_field("values", &OrderedMap(&values))?;
        st.serialize_field("subst", &OrderedMap(&subst))?;
        st.end()
    }
}

struct OrderedMap<'a, V>(&'a [(String, V)]);

impl<V: Serialize> Serialize for OrderedMap<'_, V> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Specialization {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let r = SpecRepr::deserialize(d)?;
        let mut s = Specialization::new();
        for (k, x) in r.values {
            let v: VarId = k.parse().map_err(D::Error::custom)?;
            s.set(v, rational::parse(&x).map_err(D::Error::custom)?).map_err(D::Error::custom)?;
        }
        for (k, m) in r.subst {
            s.substitute(k.parse().map_err(D::Error::custom)?, m);
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalResult {
    Value(Rational),
    Zero,
    Pole,
}

impl EvalResult {
    pub fn value(&self) -> Option<Rational> {
        match self {
            EvalResult::Value(x) => Some(x.clone()),
            EvalResult::Zero => Some(Rational::zero()),
            EvalResult::Pole => None,
        }
    }
}

/// Evaluates a term at `q = q_val`. A vanishing numerator factor wins over a
/// vanishing denominator factor.
pub fn eval_term(t: &FactoredTerm, q_val: &Rational, s: &Specialization) -> Result<EvalResult> {
    eval_term_in(t, VarId::Q, q_val, s)
}

/// As [`eval_term`], with `var` in the role of `q`.
pub fn eval_term_in(t: &FactoredTerm, var: VarId, val: &Rational, s: &Specialization) -> Result<EvalResult> {
    match t.status() {
        TermStatus::Zero => return Ok(EvalResult::Zero),
        TermStatus::IllDefined => return Ok(EvalResult::Pole),
        TermStatus::Regular => {}
    }
    if t.scalar.is_zero() {
        return Ok(EvalResult::Zero);
    }
    let extra = Some((var, val));
    let mut acc = t.scalar.clone() * s.eval_monomial_with(&t.lead, extra)?;
    let mut pole = false;
    let mut den = Rational::one();
    for (m, e) in t.factors() {
        let g = Rational::one() - s.eval_monomial_with(m, extra)?;
        if g.is_zero() {
            if e > 0 {
                return Ok(EvalResult::Zero);
            }
            pole = true;
            continue;
        }
        if e > 0 {
            acc *= rational::pow(&g, e);
        } else {
            den *= rational::pow(&g, -e);
        }
    }
    if pole {
        return Ok(EvalResult::Pole);
    }
    Ok(EvalResult::Value(acc / den))
}

/// Sum of term evaluations; any pole makes the sum a pole.
pub fn eval_sum(sum: &QSum, q_val: &Rational, s: &Specialization) -> Result<EvalResult> {
    eval_sum_in(sum, VarId::Q, q_val, s)
}

pub fn eval_sum_in(sum: &QSum, var: VarId, val: &Rational, s: &Specialization) -> Result<EvalResult> {
    let mut acc = Rational::zero();
    for t in &sum.terms {
        match eval_term_in(t, var, val, s)? {
            EvalResult::Value(x) => acc += x,
            EvalResult::Zero => {}
            EvalResult::Pole => return Ok(EvalResult::Pole),
        }
    }
    Ok(if acc.is_zero() { EvalResult::Zero } else { EvalResult::Value(acc) })
}
