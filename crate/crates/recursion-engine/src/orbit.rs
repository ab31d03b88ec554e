use std::collections::BTreeMap;
use std::fmt;

use exact_core::{Monomial, VarId};
use flag_geometry::{
    fixed_points_x, fixed_points_y, x_restriction, y_restriction, DegreeVector, FixedPointX, FixedPointY, FlagShape,
};
use serde::{Deserialize, Serialize};

use crate::RecursionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedPoint {
    X(FixedPointX),
    Y(FixedPointY),
}

impl FixedPoint {
    /// Substitution `P_is -> P_is|_fp` in `Λ` variables.
    pub fn restriction(&self, shape: &FlagShape) -> BTreeMap<VarId, Monomial> {
        match self {
            FixedPoint::X(x) => x_restriction(shape, x),
            FixedPoint::Y(y) => y_restriction(shape, y),
        }
    }
}

impl fmt::Display for FixedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixedPoint::X(x) => x.fmt(f),
            FixedPoint::Y(y) => y.fmt(f),
        }
    }
}

/// `Λ_{ar} -> C_{ar}^m` for every level `a = 2..n+1`.
pub fn cover_map(shape: &FlagShape, m: u32) -> BTreeMap<VarId, Monomial> {
    let mut map = BTreeMap::new();
    for a in 2..=shape.n() + 1 {
        for r in 1..=shape.dim(a) {
            map.insert(VarId::lambda(a, r), Monomial::var_pow(VarId::cover(a, r), m as i64));
        }
    }
    map
}

/// An invariant orbit from `a` to `b` covered `m` times.
///
/// `lambda` is the tangent character at `a` in `Λ` variables and `u` its
/// `m`-th root in the cover variables `C`, with `Λ = C^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitDatum {
    pub side: Side,
    pub shape: FlagShape,
    pub a: FixedPoint,
    pub b: FixedPoint,
    /// Tangent label `(i, s, r)`: on `Y` the slot `(i, s)` and new image `r`;
    /// on `X` the level and the coordinates swapped.
    pub label: (usize, usize, usize),
    pub lambda: Monomial,
    pub m: u32,
    pub degree: DegreeVector,
}

impl OrbitDatum {
    fn finish(
        side: Side,
        shape: &FlagShape,
        a: FixedPoint,
        b: FixedPoint,
        label: (usize, usize, usize),
        lambda: Monomial,
        m: u32,
    ) -> Result<Self, RecursionError> {
        if m == 0 {
            return Err(RecursionError::Invalid("cover degree must be positive".into()));
        }
        let ra = a.restriction(shape);
        let rb = b.restriction(shape);
        let mut degree = DegreeVector::zero(shape);
        for (i, s) in shape.slots() {
            let v = VarId::p(i, s);
            let ratio = rb[&v].div(&ra[&v]);
            let k = ratio.log_base(&lambda).ok_or_else(|| {
                RecursionError::Invalid(format!("P_{i}_{s} does not move by a power of {lambda} from {a} to {b}"))
            })?;
            degree.set(i, s, k);
        }
        if !degree.is_nonnegative() {
            return Err(RecursionError::Invalid(format!("negative orbit degree {degree}")));
        }
        Ok(OrbitDatum { side, shape: shape.clone(), a, b, label, lambda, m, degree })
    }

    /// X orbit at `a` moving coordinate `s ∈ S_i` to `r ∈ S_{i+1} \ S_i`
    /// on every level that contains `s` up to `i`.
    pub fn x_orbit(
        shape: &FlagShape,
        a: &FixedPointX,
        i: usize,
        s: usize,
        r: usize,
        m: u32,
    ) -> Result<Self, RecursionError> {
        let n = shape.n();
        let bad = || RecursionError::Invalid(format!("({i},{s},{r}) is not a tangent direction at {a}"));
        if i == 0 || i > n || !a.set(i).contains(&s) || a.set(i).contains(&r) {
            return Err(bad());
        }
        if (i < n && !a.set(i + 1).contains(&r)) || r == 0 || r > shape.ambient() {
            return Err(bad());
        }
        let mut chain = a.chain.clone();
        for set in chain.iter_mut().take(i) {
            for x in set.iter_mut().filter(|x| **x == s) {
                *x = r;
            }
        }
        let b = FixedPointX::new(shape, chain).ok_or_else(bad)?;
        let top = shape.n() + 1;
        let lambda = Monomial::from_pairs([(VarId::lambda(top, r), 1), (VarId::lambda(top, s), -1)]);
        Self::finish(Side::X, shape, FixedPoint::X(a.clone()), FixedPoint::X(b), (i, s, r), lambda, m)
    }

    /// Y orbit at `a` changing `f_i(s)` to `r`; the character is the TY root
    /// `P_{i+1,r} Λ_{i+1,r} / P_is` at `a`.
    pub fn y_orbit(
        shape: &FlagShape,
        a: &FixedPointY,
        i: usize,
        s: usize,
        r: usize,
        m: u32,
    ) -> Result<Self, RecursionError> {
        if i == 0 || i > shape.n() || s == 0 || s > shape.dim(i) || r == 0 || r > shape.dim(i + 1) || a.map(i, s) == r {
            return Err(RecursionError::Invalid(format!("({i},{s},{r}) is not a tangent direction at {a}")));
        }
        let b = a.with_map(i, s, r);
        let ra = y_restriction(shape, a);
        let mut lambda = Monomial::var(VarId::lambda(i + 1, r)).div(&ra[&VarId::p(i, s)]);
        if i < shape.n() {
            lambda = lambda.mul(&ra[&VarId::p(i + 1, r)]);
        }
        Self::finish(Side::Y, shape, FixedPoint::Y(a.clone()), FixedPoint::Y(b), (i, s, r), lambda, m)
    }

    /// `λ^{1/m}` in cover variables.
    pub fn root(&self) -> Monomial {
        self.lambda.substitute(&cover_map(&self.shape, 1))
    }

    /// `P|_a` in cover variables.
    pub fn restriction_a(&self) -> BTreeMap<VarId, Monomial> {
        covered(&self.a.restriction(&self.shape), &self.shape, self.m)
    }

    pub fn restriction_b(&self) -> BTreeMap<VarId, Monomial> {
        covered(&self.b.restriction(&self.shape), &self.shape, self.m)
    }

    pub fn descriptor(&self) -> OrbitDescriptor {
        OrbitDescriptor {
            side: self.side,
            shape: self.shape.clone(),
            a: self.a.to_string(),
            b: self.b.to_string(),
            label: self.label,
            lambda: self.lambda.clone(),
            m: self.m,
            degree: self.degree.clone(),
        }
    }
}

/// Restriction map with every `Λ` replaced by `C^m`, plus the `Λ` map itself.
pub fn covered(restr: &BTreeMap<VarId, Monomial>, shape: &FlagShape, m: u32) -> BTreeMap<VarId, Monomial> {
    let cov = cover_map(shape, m);
    let mut out: BTreeMap<VarId, Monomial> = restr.iter().map(|(v, x)| (*v, x.substitute(&cov))).collect();
    out.extend(cov);
    out
}

/// Serializable summary of an orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitDescriptor {
    pub side: Side,
    pub shape: FlagShape,
    pub a: String,
    pub b: String,
    pub label: (usize, usize, usize),
    pub lambda: Monomial,
    pub m: u32,
    pub degree: DegreeVector,
}

/// Every X orbit from every fixed point, in enumeration order.
pub fn all_x_orbits(shape: &FlagShape, m: u32) -> Vec<OrbitDatum> {
    let n = shape.n();
    let mut out = Vec::new();
    for a in fixed_points_x(shape) {
        for i in 1..=n {
            let upper: Vec<usize> = if i == n { (1..=shape.ambient()).collect() } else { a.set(i + 1).to_vec() };
            for &s in a.set(i) {
                for &r in upper.iter().filter(|r| !a.set(i).contains(r)) {
                    out.push(OrbitDatum::x_orbit(shape, &a, i, s, r, m).expect("enumerated direction"));
                }
            }
        }
    }
    out
}

/// Y orbits whose two ends are nondegenerate.
pub fn nondegenerate_y_orbits(shape: &FlagShape, m: u32) -> Vec<OrbitDatum> {
    let mut out = Vec::new();
    for a in fixed_points_y(shape).into_iter().filter(|f| f.is_nondegenerate()) {
        for (i, s) in shape.slots() {
            for r in 1..=shape.dim(i + 1) {
                if a.map(i, s) != r && a.with_map(i, s, r).is_nondegenerate() {
                    out.push(OrbitDatum::y_orbit(shape, &a, i, s, r, m).expect("enumerated direction"));
                }
            }
        }
    }
    out
}
