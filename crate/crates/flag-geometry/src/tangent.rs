use exact_core::{Monomial, VarId};
use serde::{Deserialize, Serialize};

use crate::fixed::{descend_monomial, lambda_top, restrict_p_y, x_restriction, y_restriction};
use crate::{FixedPointX, FixedPointY, FlagShape, GeometryError};

/// A torus character of a tangent direction; `label = (i, r, s)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TangentChar {
    pub chr: Monomial,
    pub label: (usize, usize, usize),
}

/// A signed K-theoretic Chern root of a virtual bundle, before restriction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernRoot {
    pub chr: Monomial,
    pub sign: i32,
    pub label: (usize, usize, usize),
}

/// `P_{i+1,r} Λ_{i+1,r} / P_{is}` (with `P_{n+1,r} = 1`) and `-1` per `(i, s)`.
pub fn ty_roots(shape: &FlagShape) -> Vec<ChernRoot> {
    let n = shape.n();
    let mut out = Vec::new();
    for (i, s) in shape.slots() {
        for r in 1..=shape.dim(i + 1) {
            let mut m = Monomial::from_pairs([(VarId::lambda(i + 1, r), 1), (VarId::p(i, s), -1)]);
            if i < n {
                m.mul_var(VarId::p(i + 1, r), 1);
            }
            out.push(ChernRoot { chr: m, sign: 1, label: (i, r, s) });
        }
        out.push(ChernRoot { chr: Monomial::one(), sign: -1, label: (i, 0, s) });
    }
    out
}

/// `y^{-1} P_{ir} / P_{is}` for `r != s`.
pub fn twist_roots(shape: &FlagShape) -> Vec<ChernRoot> {
    let mut out = Vec::new();
    for (i, s) in shape.slots() {
        for r in 1..=shape.dim(i) {
            if r != s {
                let m = Monomial::from_pairs([(VarId::Y, -1), (VarId::p(i, r), 1), (VarId::p(i, s), -1)]);
                out.push(ChernRoot { chr: m, sign: 1, label: (i, r, s) });
            }
        }
    }
    out
}

/// `Hom(V_i, V_{i+1} - V_i)` in Chern roots: `+P_{i+1,r}/P_{is}` (`Λ_r/P_{ns}`
/// at the top) and `-P_{ir}/P_{is}` for all `r, s`.
pub fn tx_roots(shape: &FlagShape) -> Vec<ChernRoot> {
    let n = shape.n();
    let mut out = Vec::new();
    for (i, s) in shape.slots() {
        for r in 1..=shape.dim(i + 1) {
            let up = if i < n { Monomial::var(VarId::p(i + 1, r)) } else { lambda_top(shape, r) };
            out.push(ChernRoot { chr: up.mul(&Monomial::var_pow(VarId::p(i, s), -1)), sign: 1, label: (i, r, s) });
        }
        for r in 1..=shape.dim(i) {
            let m = Monomial::from_pairs([(VarId::p(i, r), 1), (VarId::p(i, s), -1)]);
            out.push(ChernRoot { chr: m, sign: -1, label: (i, r, s) });
        }
    }
    out
}

/// `{Λ_r / Λ_s : s ∈ S_i, r ∈ S_{i+1} \ S_i}`.
pub fn tangent_chars_x(shape: &FlagShape, fp: &FixedPointX) -> Vec<TangentChar> {
    let n = shape.n();
    let mut out = Vec::new();
    for i in 1..=n {
        let upper: Vec<usize> = if i == n { (1..=shape.ambient()).collect() } else { fp.set(i + 1).to_vec() };
        for &s in fp.set(i) {
            for &r in upper.iter().filter(|r| !fp.set(i).contains(r)) {
                let chr = lambda_top(shape, r).mul(&lambda_top(shape, s).inv());
                out.push(TangentChar { chr, label: (i, r, s) });
            }
        }
    }
    out
}

/// Tangent characters of `Y` at a fixed point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCharsY {
    pub chars: Vec<TangentChar>,
    /// Labels of characters that become trivial once `Λ_{a r} -> 1` for `a <= n`.
    pub trivial_after_descent: Vec<(usize, usize, usize)>,
}

impl TangentCharsY {
    /// `DegenerateTrivialChar` when some direction is not isolated under the
    /// small torus.
    pub fn report(&self) -> Option<GeometryError> {
        if self.trivial_after_descent.is_empty() {
            None
        } else {
            Some(GeometryError::DegenerateTrivialChar(self.trivial_after_descent.clone()))
        }
    }
}

/// Restricted TY roots with the `r = f_i(s)` trivial character cancelled
/// against the `-1` of each `(i, s)`.
pub fn tangent_chars_y(shape: &FlagShape, fp: &FixedPointY) -> TangentCharsY {
    let sub = y_restriction(shape, fp);
    let mut chars = Vec::new();
    let mut trivial = Vec::new();
    for root in ty_roots(shape) {
        if root.sign < 0 {
            continue;
        }
        let (i, r, s) = root.label;
        if r == fp.map(i, s) {
            debug_assert!(root.chr.substitute(&sub).is_one());
            continue;
        }
        let chr = root.chr.substitute(&sub);
        if descend_monomial(shape, &chr).is_one() {
            trivial.push(root.label);
        }
        chars.push(TangentChar { chr, label: root.label });
    }
    TangentCharsY { chars, trivial_after_descent: trivial }
}

/// Twisting characters `P_{ir}/P_{is}` (without `y`) restricted to `fp`.
pub fn twist_chars_y(shape: &FlagShape, fp: &FixedPointY) -> Vec<TangentChar> {
    let sub = y_restriction(shape, fp);
    twist_roots(shape)
        .into_iter()
        .map(|root| {
            let chr = root.chr.substitute(&sub).filter(|v| v != VarId::Y);
            TangentChar { chr, label: root.label }
        })
        .collect()
}

/// Signed TX roots at an X fixed point, with cancelling pairs removed.
pub fn tx_chars_signed(shape: &FlagShape, fp: &FixedPointX) -> Vec<(Monomial, i32)> {
    let sub = x_restriction(shape, fp);
    let mut counts: std::collections::BTreeMap<Monomial, i32> = Default::default();
    for root in tx_roots(shape) {
        *counts.entry(root.chr.substitute(&sub)).or_default() += root.sign;
    }
    counts.into_iter().filter(|(_, c)| *c != 0).collect()
}

/// `λ_{ij} = prod_{a=i+1}^{n+1} Λ_{aj}`.
pub fn lambda_ij(shape: &FlagShape, i: usize, j: usize) -> Monomial {
    Monomial::from_pairs(((i + 1)..=(shape.n() + 1)).map(|lv| (VarId::lambda(lv, j), 1)))
}

/// Restriction of `P_{is}` at the distinguished point equals `λ_{is}`.
pub fn check_lambda_at_distinguished(shape: &FlagShape) -> bool {
    let a = FixedPointY::distinguished(shape);
    shape.slots().all(|(i, s)| restrict_p_y(shape, &a, i, s) == lambda_ij(shape, i, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f123() -> FlagShape {
        "1,2:3".parse().unwrap()
    }

    #[test]
    fn x_characters() {
        let p1: FlagShape = "1:2".parse().unwrap();
        let x = &crate::fixed_points_x(&p1)[0];
        let cs = tangent_chars_x(&p1, x);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].chr, lambda_top(&p1, 2).mul(&lambda_top(&p1, 1).inv()));

        let sh = f123();
        let x = FixedPointX::new(&sh, vec![vec![1], vec![1, 2]]).unwrap();
        assert_eq!(tangent_chars_x(&sh, &x).len(), 3);
        let g: FlagShape = "2:4".parse().unwrap();
        assert_eq!(tangent_chars_x(&g, &crate::fixed_points_x(&g)[0]).len(), 4);
    }

    #[test]
    fn y_characters_at_a() {
        let sh = f123();
        let a = FixedPointY::distinguished(&sh);
        let t = tangent_chars_y(&sh, &a);
        assert_eq!(t.chars.len(), 5);
        assert!(t.report().is_none());
        let target = lambda_top(&sh, 2).mul(&lambda_top(&sh, 1).inv());
        let hits = t.chars.iter().filter(|c| descend_monomial(&sh, &c.chr) == target).count();
        assert_eq!(hits, 2);
        assert!(check_lambda_at_distinguished(&sh));
    }

    #[test]
    fn degenerate_point_reports() {
        let sh = f123();
        let e2 = FixedPointY::distinguished(&sh).with_map(2, 1, 2);
        let t = tangent_chars_y(&sh, &e2);
        assert_eq!(t.chars.len(), 5);
        assert!(t.report().is_some());
    }
}
