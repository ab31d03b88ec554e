//! Thin helpers around `BigRational`.

pub use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::CoreError;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// `x^e` for any integer exponent. Panics on `0^e` with `e < 0`.
pub fn pow(x: &Rational, e: i64) -> Rational {
    if e == 0 {
        return Rational::one();
    }
    let mut base = if e < 0 {
        assert!(!x.is_zero(), "negative power of zero");
        x.recip()
    } else {
        x.clone()
    };
    let mut k = e.unsigned_abs();
    let mut acc = Rational::one();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &base;
        }
        k >>= 1;
        if k > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Exact `m`-th root when it exists (positive root for even `m`).
pub fn nth_root(x: &Rational, m: u32) -> Option<Rational> {
    if m == 1 {
        return Some(x.clone());
    }
    if x.is_zero() {
        return Some(Rational::zero());
    }
    let neg = x < &Rational::zero();
    if neg && m.is_multiple_of(2) {
        return None;
    }
    let n = x.numer().magnitude().nth_root(m);
    let d = x.denom().magnitude().nth_root(m);
    if num_traits::Pow::pow(&n, m) != *x.numer().magnitude() || num_traits::Pow::pow(&d, m) != *x.denom().magnitude() {
        return None;
    }
    let mut r = Rational::new(BigInt::from(n), BigInt::from(d));
    if neg {
        r = -r;
    }
    Some(r)
}

pub fn parse(s: &str) -> Result<Rational, CoreError> {
    s.trim().parse::<Rational>().map_err(|e| CoreError::Parse(format!("bad rational {s:?}: {e}")))
}

/// Serde adapter: rationals travel as `"p/q"` strings.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_and_roots() {
        assert_eq!(pow(&rat(2, 3), 3), rat(8, 27));
        assert_eq!(pow(&rat(2, 3), -2), rat(9, 4));
        assert_eq!(nth_root(&rat(8, 27), 3), Some(rat(2, 3)));
        assert_eq!(nth_root(&rat(-8, 27), 3), Some(rat(-2, 3)));
        assert_eq!(nth_root(&rat(2, 1), 2), None);
        assert_eq!(nth_root(&rat(-4, 1), 2), None);
    }

    #[test]
    fn string_form() {
        assert_eq!(rat(-6, 4).to_string(), "-3/2");
        assert_eq!(parse("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse("5").unwrap(), int(5));
        assert!(parse("x").is_err());
    }
}
