use std::collections::BTreeMap;
use std::fmt;

use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::VarId;

/// Laurent monomial: a finitely supported map `VarId -> i64`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<VarId, i64>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(v: VarId) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: VarId, e: i64) -> Self {
        let mut m = BTreeMap::new();
        if e != 0 {
            m.insert(v, e);
        }
        Monomial(m)
    }

    pub fn from_pairs<I: IntoIterator<Item = (VarId, i64)>>(pairs: I) -> Self {
        let mut out = Monomial::one();
        for (v, e) in pairs {
            out.mul_var(v, e);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: VarId) -> i64 {
        self.0.get(&v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, i64)> + '_ {
        self.0.iter().map(|(v, e)| (*v, *e))
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.0.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul_var(&mut self, v: VarId, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.0.entry(v).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.0.remove(&v);
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in other.iter() {
            out.mul_var(v, e);
        }
        out
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|(v, e)| (*v, -e)).collect())
    }

    pub fn pow(&self, k: i64) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial(self.0.iter().map(|(v, e)| (*v, e * k)).collect())
    }

    /// Exact `m`-th root if every exponent is divisible by `m`.
    pub fn root(&self, m: i64) -> Option<Monomial> {
        if self.0.values().all(|e| e % m == 0) {
            Some(Monomial(self.0.iter().map(|(v, e)| (*v, e / m)).collect()))
        } else {
            None
        }
    }

    /// Splits off the power of `v`: returns `(exponent of v, rest)`.
    pub fn split(&self, v: VarId) -> (i64, Monomial) {
        let mut rest = self.clone();
        let e = rest.0.remove(&v).unwrap_or(0);
        (e, rest)
    }

    /// Replaces each variable in `map` by its image monomial.
    pub fn substitute(&self, map: &BTreeMap<VarId, Monomial>) -> Monomial {
        if map.is_empty() {
            return self.clone();
        }
        let mut out = Monomial::one();
        for (v, e) in self.iter() {
            match map.get(&v) {
                Some(img) => {
                    for (w, f) in img.iter() {
                        out.mul_var(w, f * e);
                    }
                }
                None => out.mul_var(v, e),
            }
        }
        out
    }

    /// Keeps only the variables for which `keep` holds.
    pub fn filter(&self, keep: impl Fn(VarId) -> bool) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| keep(**v)).map(|(v, e)| (*v, *e)).collect())
    }

    /// `k` with `self = base^k`, if such an integer exists.
    pub fn log_base(&self, base: &Monomial) -> Option<i64> {
        if base.is_one() {
            return if self.is_one() { Some(0) } else { None };
        }
        let (v0, e0) = base.iter().next().unwrap();
        let s = self.exponent(v0);
        if s % e0 != 0 {
            return None;
        }
        let k = s / e0;
        if base.pow(k) == *self {
            Some(k)
        } else {
            None
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, e) in self.iter() {
            map.serialize_entry(&v.to_string(), &e)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Monomial;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from variable names to integer exponents")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<Monomial, A::Error> {
                let mut m = Monomial::one();
                while let Some((k, e)) = a.next_entry::<String, i64>()? {
                    let v: VarId = k.parse().map_err(serde::de::Error::custom)?;
                    m.mul_var(v, e);
                }
                Ok(m)
            }
        }
        d.deserialize_map(V)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Monomial::from_pairs([(VarId::Q, 2), (VarId::lambda(2, 1), -1)]);
        let b = Monomial::from_pairs([(VarId::lambda(2, 1), 1)]);
        assert_eq!(a.mul(&b), Monomial::var_pow(VarId::Q, 2));
        assert!(a.mul(&a.inv()).is_one());
        assert_eq!(a.pow(3).root(3), Some(a.clone()));
        assert_eq!(a.root(2), None);
        assert_eq!(a.pow(-2).log_base(&a), Some(-2));
        assert_eq!(b.log_base(&a), None);
    }

    #[test]
    fn substitution() {
        let mut map = BTreeMap::new();
        map.insert(VarId::p(1, 1), Monomial::from_pairs([(VarId::lambda(2, 1), 1), (VarId::lambda(3, 1), 1)]));
        let m = Monomial::from_pairs([(VarId::p(1, 1), 2), (VarId::Q, 1)]);
        let s = m.substitute(&map);
        assert_eq!(s.exponent(VarId::lambda(2, 1)), 2);
        assert_eq!(s.exponent(VarId::p(1, 1)), 0);
    }
}
