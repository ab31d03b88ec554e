use std::collections::BTreeMap;
use std::fmt;

use exact_core::{Monomial, VarId};
use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::FlagShape;

/// Coordinate flag `S_1 ⊂ ... ⊂ S_n ⊂ {1..N}`; each `S_i` is an ordered
/// tuple fixing the labels of the Chern roots of `V_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedPointX {
    pub chain: Vec<Vec<usize>>,
}

/// Maps `f_i : {1..v_i} -> {1..v_{i+1}}`, `i = 1..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FixedPointY {
    pub maps: Vec<Vec<usize>>,
}

impl FixedPointX {
    pub fn new(shape: &FlagShape, chain: Vec<Vec<usize>>) -> Option<Self> {
        if chain.len() != shape.n() {
            return None;
        }
        for (k, s) in chain.iter().enumerate() {
            let i = k + 1;
            if s.len() != shape.dim(i) || s.iter().any(|&x| x == 0 || x > shape.ambient()) || !s.iter().all_unique() {
                return None;
            }
            if i > 1 && !chain[k - 1].iter().all(|x| s.contains(x)) {
                return None;
            }
        }
        Some(FixedPointX { chain })
    }

    /// `S_i` as a labeled tuple.
    pub fn set(&self, i: usize) -> &[usize] {
        &self.chain[i - 1]
    }

    /// Coordinate carried by the Chern root `P_{is}`.
    pub fn label(&self, i: usize, s: usize) -> usize {
        self.chain[i - 1][s - 1]
    }

    /// Same chain with every `S_i` sorted: equality up to relabeling.
    pub fn canonical(&self) -> FixedPointX {
        FixedPointX { chain: self.chain.iter().map(|s| s.iter().copied().sorted().collect()).collect() }
    }

    /// The nondegenerate Y point whose composite paths realize this labeling.
    pub fn lift(&self, shape: &FlagShape) -> FixedPointY {
        let n = shape.n();
        let mut maps = Vec::with_capacity(n);
        for i in 1..=n {
            let upper: Vec<usize> = if i == n { (1..=shape.ambient()).collect() } else { self.chain[i].clone() };
            maps.push(self.chain[i - 1].iter().map(|x| upper.iter().position(|y| y == x).unwrap() + 1).collect());
        }
        FixedPointY { maps }
    }
}

impl fmt::Display for FixedPointX {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.chain.iter().map(|s| format!("{{{}}}", s.iter().join(","))).collect();
        f.write_str(&parts.join("<"))
    }
}

impl FixedPointY {
    pub fn new(shape: &FlagShape, maps: Vec<Vec<usize>>) -> Option<Self> {
        if maps.len() != shape.n() {
            return None;
        }
        for (k, f) in maps.iter().enumerate() {
            let i = k + 1;
            if f.len() != shape.dim(i) || f.iter().any(|&x| x == 0 || x > shape.dim(i + 1)) {
                return None;
            }
        }
        Some(FixedPointY { maps })
    }

    /// The distinguished point: every `f_i` the canonical inclusion.
    pub fn distinguished(shape: &FlagShape) -> Self {
        FixedPointY { maps: (1..=shape.n()).map(|i| (1..=shape.dim(i)).collect()).collect() }
    }

    pub fn map(&self, i: usize, s: usize) -> usize {
        self.maps[i - 1][s - 1]
    }

    pub fn with_map(&self, i: usize, s: usize, r: usize) -> FixedPointY {
        let mut out = self.clone();
        out.maps[i - 1][s - 1] = r;
        out
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.maps.iter().all(|f| f.iter().all_unique())
    }

    /// `(g_{i+1}, ..., g_{n+1})` with `g_{i+1} = f_i(s)`, `g_{a+1} = f_a(g_a)`.
    pub fn path(&self, i: usize, s: usize) -> Vec<usize> {
        let n = self.maps.len();
        let mut out = Vec::with_capacity(n + 1 - i);
        let mut g = self.map(i, s);
        out.push(g);
        for a in (i + 1)..=n {
            g = self.map(a, g);
            out.push(g);
        }
        out
    }

    /// Whether the path starting at `(j, t)` runs through `(i, s)`.
    pub fn passes_through(&self, j: usize, t: usize, i: usize, s: usize) -> bool {
        if j > i {
            return false;
        }
        if j == i {
            return t == s;
        }
        self.path(j, t)[i - j - 1] == s
    }

    pub fn endpoint(&self, i: usize, s: usize) -> usize {
        *self.path(i, s).last().unwrap()
    }

    /// The coordinate flag of path endpoints, if nondegenerate.
    pub fn descend(&self, shape: &FlagShape) -> Option<FixedPointX> {
        if !self.is_nondegenerate() {
            return None;
        }
        let chain = (1..=shape.n()).map(|i| (1..=shape.dim(i)).map(|s| self.endpoint(i, s)).collect()).collect();
        FixedPointX::new(shape, chain)
    }
}

impl fmt::Display for FixedPointY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.maps.iter().map(|m| format!("[{}]", m.iter().join(","))).collect();
        f.write_str(&parts.join(""))
    }
}

/// All coordinate flags; each `S_i` extends `S_{i-1}` as a tuple, the new
/// entries sorted.
pub fn fixed_points_x(shape: &FlagShape) -> Vec<FixedPointX> {
    let mut out = Vec::new();
    let mut chain = Vec::new();
    extend_chain(shape, 1, &mut chain, &mut out);
    out
}

fn extend_chain(shape: &FlagShape, i: usize, chain: &mut Vec<Vec<usize>>, out: &mut Vec<FixedPointX>) {
    if i > shape.n() {
        out.push(FixedPointX { chain: chain.clone() });
        return;
    }
    let prev: Vec<usize> = if i == 1 { Vec::new() } else { chain[i - 2].clone() };
    let free: Vec<usize> = (1..=shape.ambient()).filter(|x| !prev.contains(x)).collect();
    // S_i ⊃ S_{i-1}; S_1 varies slowest
    let need = shape.dim(i) - prev.len();
    for add in free.iter().copied().combinations(need) {
        let mut s = prev.clone();
        s.extend(add);
        chain.push(s);
        extend_chain(shape, i + 1, chain, out);
        chain.pop();
    }
}

/// All tuples of maps, in lexicographic order.
pub fn fixed_points_y(shape: &FlagShape) -> Vec<FixedPointY> {
    let ranges: Vec<Vec<usize>> = shape.slots().map(|(i, _)| (1..=shape.dim(i + 1)).collect()).collect();
    ranges
        .into_iter()
        .multi_cartesian_product()
        .map(|flat| {
            let mut maps = Vec::with_capacity(shape.n());
            let mut k = 0;
            for i in 1..=shape.n() {
                maps.push(flat[k..k + shape.dim(i)].to_vec());
                k += shape.dim(i);
            }
            FixedPointY { maps }
        })
        .collect()
}

/// `P_{is}|_fp = prod_{a=i+1}^{n+1} Λ_{a, g_a}`.
pub fn restrict_p_y(_shape: &FlagShape, fp: &FixedPointY, i: usize, s: usize) -> Monomial {
    let path = fp.path(i, s);
    Monomial::from_pairs(path.iter().enumerate().map(|(k, &g)| (VarId::lambda(i + 1 + k, g), 1)))
}

/// The Chern roots of `V_i` at a coordinate flag, `Λ_t` for `t ∈ S_i`.
pub fn restrict_p_x(shape: &FlagShape, fp: &FixedPointX, i: usize) -> Vec<Monomial> {
    fp.set(i).iter().map(|&t| lambda_top(shape, t)).collect()
}

/// `Λ_t`, stored as `Λ_{n+1, t}`.
pub fn lambda_top(shape: &FlagShape, t: usize) -> Monomial {
    Monomial::var(VarId::lambda(shape.n() + 1, t))
}

/// Substitution `P_{is} -> P_{is}|_fp` on Y.
pub fn y_restriction(shape: &FlagShape, fp: &FixedPointY) -> BTreeMap<VarId, Monomial> {
    shape.slots().map(|(i, s)| (VarId::p(i, s), restrict_p_y(shape, fp, i, s))).collect()
}

/// Substitution `P_{is} -> Λ_{S_i[s]}` on X.
pub fn x_restriction(shape: &FlagShape, fp: &FixedPointX) -> BTreeMap<VarId, Monomial> {
    shape.slots().map(|(i, s)| (VarId::p(i, s), lambda_top(shape, fp.label(i, s)))).collect()
}

/// Descent `Λ_{a r} -> 1` for `a <= n` on a monomial.
pub fn descend_monomial(shape: &FlagShape, m: &Monomial) -> Monomial {
    let n = shape.n() as u16;
    m.filter(|v| !matches!(v, VarId::Lambda(a, _) if a <= n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f123() -> FlagShape {
        "1,2:3".parse().unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(fixed_points_x(&"1:2".parse().unwrap()).len(), 2);
        assert_eq!(fixed_points_x(&f123()).len(), 6);
        assert_eq!(fixed_points_x(&"2:4".parse().unwrap()).len(), 6);
        let ys = fixed_points_y(&f123());
        assert_eq!(ys.len(), 18);
        assert_eq!(ys.iter().filter(|y| y.is_nondegenerate()).count(), 12);
        let a = FixedPointY::distinguished(&f123());
        assert!(ys.contains(&a) && a.is_nondegenerate());
    }

    #[test]
    fn restrictions_at_a() {
        let sh = f123();
        let a = FixedPointY::distinguished(&sh);
        let l = |a, r| Monomial::var(VarId::lambda(a, r));
        assert_eq!(restrict_p_y(&sh, &a, 1, 1), l(2, 1).mul(&l(3, 1)));
        assert_eq!(restrict_p_y(&sh, &a, 2, 2), l(3, 2));
        let e2 = a.with_map(2, 1, 2);
        assert_eq!(restrict_p_y(&sh, &e2, 2, 1), l(3, 2));
        assert!(!e2.is_nondegenerate());
    }

    #[test]
    fn lift_and_descend() {
        let sh = f123();
        for x in fixed_points_x(&sh) {
            let y = x.lift(&sh);
            assert!(y.is_nondegenerate());
            assert_eq!(y.descend(&sh).unwrap(), x);
        }
        let grass: FlagShape = "2:4".parse().unwrap();
        let x = FixedPointX::new(&grass, vec![vec![2, 4]]).unwrap();
        assert_eq!(restrict_p_x(&grass, &x, 1), vec![lambda_top(&grass, 2), lambda_top(&grass, 4)]);
    }

    #[test]
    fn paths() {
        let sh = f123();
        let a = FixedPointY::distinguished(&sh);
        assert!(a.passes_through(1, 1, 2, 1));
        assert!(!a.passes_through(1, 1, 2, 2));
        let c = a.with_map(1, 1, 2);
        assert!(c.passes_through(1, 1, 2, 2));
        assert_eq!(c.descend(&sh).unwrap().chain, vec![vec![2], vec![1, 2]]);
    }
}
