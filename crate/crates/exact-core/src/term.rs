use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{self, Rational};
use crate::{Monomial, VarId};

/// `(1 - monomial)^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factor {
    pub monomial: Monomial,
    pub exponent: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermStatus {
    Regular,
    /// Carries a literal `(1 - 1)` with positive net exponent.
    Zero,
    /// Carries a literal `(1 - 1)` with negative net exponent.
    IllDefined,
}

/// `scalar * lead * prod (1 - m)^e`, factors merged by monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredTerm {
    pub scalar: Rational,
    pub lead: Monomial,
    factors: BTreeMap<Monomial, i64>,
}

impl FactoredTerm {
    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        FactoredTerm { scalar: c, lead: Monomial::one(), factors: BTreeMap::new() }
    }

    pub fn monomial(c: Rational, lead: Monomial) -> Self {
        FactoredTerm { scalar: c, lead, factors: BTreeMap::new() }
    }

    /// The single factor `(1 - m)^e`.
    pub fn binomial(m: Monomial, e: i64) -> Self {
        let mut t = Self::one();
        t.mul_factor(m, e);
        t
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Monomial, i64)> {
        self.factors.iter().map(|(m, e)| (m, *e))
    }

    pub fn factor_list(&self) -> Vec<Factor> {
        self.factors().map(|(m, e)| Factor { monomial: m.clone(), exponent: e }).collect()
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn factor_exponent(&self, m: &Monomial) -> i64 {
        self.factors.get(m).copied().unwrap_or(0)
    }

    pub fn mul_factor(&mut self, m: Monomial, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.factors.entry(m.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.factors.remove(&m);
        }
    }

    pub fn mul_monomial(&mut self, m: &Monomial) {
        self.lead = self.lead.mul(m);
    }

    pub fn scale(&mut self, c: &Rational) {
        self.scalar *= c;
    }

    pub fn mul(&self, other: &FactoredTerm) -> FactoredTerm {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    pub fn mul_assign(&mut self, other: &FactoredTerm) {
        self.scalar *= &other.scalar;
        self.lead = self.lead.mul(&other.lead);
        for (m, e) in other.factors() {
            self.mul_factor(m.clone(), e);
        }
    }

    /// Multiplicative inverse; `None` when the scalar is zero.
    pub fn inv(&self) -> Option<FactoredTerm> {
        if self.scalar.is_zero() {
            return None;
        }
        Some(FactoredTerm {
            scalar: self.scalar.recip(),
            lead: self.lead.inv(),
            factors: self.factors.iter().map(|(m, e)| (m.clone(), -e)).collect(),
        })
    }

    pub fn status(&self) -> TermStatus {
        match self.factors.get(&Monomial::one()) {
            Some(e) if *e > 0 => TermStatus::Zero,
            Some(_) => TermStatus::IllDefined,
            None => TermStatus::Regular,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() || self.status() == TermStatus::Zero
    }

    pub fn substitute(&self, map: &BTreeMap<VarId, Monomial>) -> FactoredTerm {
        let mut out = FactoredTerm::monomial(self.scalar.clone(), self.lead.substitute(map));
        for (m, e) in self.factors() {
            out.mul_factor(m.substitute(map), e);
        }
        out
    }

    /// Applies `f` to every monomial (lead and factors), re-merging factors.
    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> FactoredTerm {
        let mut out = FactoredTerm::monomial(self.scalar.clone(), f(&self.lead));
        for (m, e) in self.factors() {
            out.mul_factor(f(m), e);
        }
        out
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        let mut s: BTreeSet<VarId> = self.lead.vars().collect();
        for m in self.factors.keys() {
            s.extend(m.vars());
        }
        s
    }
}

impl fmt::Display for FactoredTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        if !self.lead.is_one() {
            write!(f, "*{}", self.lead)?;
        }
        for (m, e) in self.factors() {
            if e == 1 {
                write!(f, "*(1-{m})")?;
            } else {
                write!(f, "*(1-{m})^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    #[serde(with = "rational::serde_str")]
    scalar: Rational,
    lead: Monomial,
    factors: Vec<Factor>,
}

impl Serialize for FactoredTerm {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TermRepr { scalar: self.scalar.clone(), lead: self.lead.clone(), factors: self.factor_list() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FactoredTerm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = TermRepr::deserialize(d)?;
        let mut t = FactoredTerm::monomial(r.scalar, r.lead);
        for f in r.factors {
            if f.exponent == 0 {
                return Err(serde::de::Error::custom("factor exponent must be nonzero"));
            }
            t.mul_factor(f.monomial, f.exponent);
        }
        Ok(t)
    }
}

/// `prod_{l=lo}^{hi} (1 - f(l))` as a factored term, with the convention
/// that `hi < lo - 1` means `1 / prod_{l=hi+1}^{lo-1} (1 - f(l))`.
pub fn qprod(lo: i64, hi: i64, f: impl Fn(i64) -> Monomial) -> FactoredTerm {
    let mut t = FactoredTerm::one();
    if hi >= lo - 1 {
        for l in lo..=hi {
            t.mul_factor(f(l), 1);
        }
    } else {
        for l in (hi + 1)..lo {
            t.mul_factor(f(l), -1);
        }
    }
    t
}

/// `base * q^l`.
pub fn q_shift(base: &Monomial, l: i64) -> Monomial {
    let mut m = base.clone();
    m.mul_var(VarId::Q, l);
    m
}

/// A finite sum of factored terms. Addition concatenates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QSum {
    pub terms: Vec<FactoredTerm>,
}

impl QSum {
    pub fn zero() -> Self {
        QSum { terms: Vec::new() }
    }

    pub fn one() -> Self {
        FactoredTerm::one().into()
    }

    pub fn constant(c: Rational) -> Self {
        FactoredTerm::constant(c).into()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, t: FactoredTerm) {
        self.terms.push(t);
    }

    pub fn add(&self, other: &QSum) -> QSum {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        QSum { terms }
    }

    pub fn add_assign(&mut self, other: &QSum) {
        self.terms.extend(other.terms.iter().cloned());
    }

    pub fn neg(&self) -> QSum {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &QSum) -> QSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> QSum {
        QSum {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.scale(c);
                    t
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, t: &FactoredTerm) -> QSum {
        QSum { terms: self.terms.iter().map(|s| s.mul(t)).collect() }
    }

    /// Distributes; the result has `len(self) * len(other)` terms.
    pub fn mul(&self, other: &QSum) -> QSum {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        QSum { terms }
    }

    pub fn substitute(&self, map: &BTreeMap<VarId, Monomial>) -> QSum {
        QSum { terms: self.terms.iter().map(|t| t.substitute(map)).collect() }
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> QSum {
        QSum { terms: self.terms.iter().map(|t| t.map_monomials(&f)).collect() }
    }

    /// Drops terms flagged ZERO; keeps everything else untouched.
    pub fn prune_zero(&self) -> QSum {
        QSum { terms: self.terms.iter().filter(|t| !t.is_zero()).cloned().collect() }
    }

    pub fn has_ill_defined(&self) -> bool {
        self.terms.iter().any(|t| t.status() == TermStatus::IllDefined)
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        let mut s = BTreeSet::new();
        for t in &self.terms {
            s.extend(t.variables());
        }
        s
    }
}

impl From<FactoredTerm> for QSum {
    fn from(t: FactoredTerm) -> Self {
        QSum { terms: vec![t] }
    }
}

impl fmt::Display for QSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
