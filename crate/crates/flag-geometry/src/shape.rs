use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::GeometryError;

/// `Flag(v_1, ..., v_n; N)` with `0 < v_1 < ... < v_n < N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagShape {
    v: Vec<usize>,
    ambient: usize,
}

impl FlagShape {
    pub fn new(v: Vec<usize>, ambient: usize) -> Result<Self, GeometryError> {
        if v.is_empty() {
            return Err(GeometryError::InvalidShape("at least one level is required".into()));
        }
        let mut prev = 0;
        for &x in v.iter().chain(std::iter::once(&ambient)) {
            if x <= prev {
                return Err(GeometryError::InvalidShape(format!(
                    "dimensions must increase strictly: {v:?}; {ambient}"
                )));
            }
            prev = x;
        }
        if ambient > u16::MAX as usize {
            return Err(GeometryError::InvalidShape("ambient dimension too large".into()));
        }
        Ok(FlagShape { v, ambient })
    }

    /// Complete flags in `C^{n+1}`.
    pub fn complete(n: usize) -> Self {
        FlagShape::new((1..=n).collect(), n + 1).unwrap()
    }

    pub fn grassmannian(k: usize, n: usize) -> Result<Self, GeometryError> {
        FlagShape::new(vec![k], n)
    }

    /// Number of levels `n`.
    pub fn n(&self) -> usize {
        self.v.len()
    }

    /// `N`.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// `v_i` for `i` in `1..=n+1`, with `v_{n+1} = N`.
    pub fn dim(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n() + 1, "level {i} out of range");
        if i == self.n() + 1 {
            self.ambient
        } else {
            self.v[i - 1]
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.v
    }

    pub fn is_complete(&self) -> bool {
        self.ambient == self.n() + 1 && self.v.iter().enumerate().all(|(k, &x)| x == k + 1)
    }

    /// `sum_i v_i (v_{i+1} - v_i)`.
    pub fn dim_x(&self) -> usize {
        (1..=self.n()).map(|i| self.dim(i) * (self.dim(i + 1) - self.dim(i))).sum()
    }

    /// `sum_i v_i (v_{i+1} - 1)`.
    pub fn dim_y(&self) -> usize {
        (1..=self.n()).map(|i| self.dim(i) * (self.dim(i + 1) - 1)).sum()
    }

    /// Number of Chern-root slots `sum_i v_i`.
    pub fn num_roots(&self) -> usize {
        self.v.iter().sum()
    }

    /// `(i, s)` pairs in level-major order.
    pub fn slots(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (1..=self.n()).flat_map(move |i| (1..=self.dim(i)).map(move |s| (i, s)))
    }

    /// `Flag(N - v_n, ..., N - v_1; N)`.
    pub fn dual(&self) -> FlagShape {
        let v = self.v.iter().rev().map(|x| self.ambient - x).collect();
        FlagShape::new(v, self.ambient).unwrap()
    }
}

impl fmt::Display for FlagShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(|x| x.to_string()).collect();
        write!(f, "{}:{}", v.join(","), self.ambient)
    }
}

impl FromStr for FlagShape {
    type Err = GeometryError;

    /// Accepts `"1,2:3"` (and `"1,2;3"`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GeometryError::Parse(format!("expected a shape like 1,2:3, got {s:?}"));
        let (head, tail) = s.split_once([':', ';']).ok_or_else(bad)?;
        let v = head.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
        let ambient = tail.trim().parse::<usize>().map_err(|_| bad())?;
        FlagShape::new(v, ambient)
    }
}

impl Serialize for FlagShape {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FlagShape {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let s: FlagShape = "1,2:3".parse().unwrap();
        assert_eq!(s.n(), 2);
        assert_eq!(s.dim(3), 3);
        assert_eq!(s.to_string(), "1,2:3");
        assert_eq!("1,2;3".parse::<FlagShape>().unwrap(), s);
        assert!("2,1:3".parse::<FlagShape>().is_err());
        assert!("1,3:3".parse::<FlagShape>().is_err());
        assert!("x:3".parse::<FlagShape>().is_err());
        assert!(s.is_complete());
    }

    #[test]
    fn dimensions() {
        let s: FlagShape = "1,2:3".parse().unwrap();
        assert_eq!(s.dim_x(), 3);
        assert_eq!(s.dim_y(), 5);
        assert_eq!(FlagShape::grassmannian(2, 4).unwrap().dim_x(), 4);
    }

    #[test]
    fn duals() {
        let p1: FlagShape = "1:2".parse().unwrap();
        assert_eq!(p1.dual(), p1);
        let g: FlagShape = "2:4".parse().unwrap();
        assert_eq!(g.dual(), g);
        let f: FlagShape = "1,2:3".parse().unwrap();
        assert_eq!(f.dual(), f);
        let g13: FlagShape = "1:3".parse().unwrap();
        assert_eq!(g13.dual().to_string(), "2:3");
    }
}
