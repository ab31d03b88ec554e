use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::FlagShape;

/// Lattice point `d = (d_{ij})`, stored level by level.
///
/// Ordering is graded: total degree first, then lexicographically
/// descending on the flattened entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeVector {
    levels: Vec<Vec<i64>>,
}

impl DegreeVector {
    pub fn zero(shape: &FlagShape) -> Self {
        DegreeVector { levels: (1..=shape.n()).map(|i| vec![0; shape.dim(i)]).collect() }
    }

    pub fn from_levels(levels: Vec<Vec<i64>>) -> Self {
        DegreeVector { levels }
    }

    pub fn unit(shape: &FlagShape, i: usize, s: usize) -> Self {
        let mut d = Self::zero(shape);
        d.set(i, s, 1);
        d
    }

    pub fn levels(&self) -> &[Vec<i64>] {
        &self.levels
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    /// `d_{is}`, with `d_{n+1, r} = 0`.
    pub fn get(&self, i: usize, s: usize) -> i64 {
        if i > self.levels.len() {
            return 0;
        }
        self.levels[i - 1][s - 1]
    }

    pub fn set(&mut self, i: usize, s: usize, x: i64) {
        self.levels[i - 1][s - 1] = x;
    }

    pub fn total(&self) -> i64 {
        self.levels.iter().flatten().sum()
    }

    /// Per-level totals `delta_i`.
    pub fn x_degree(&self) -> Vec<i64> {
        self.levels.iter().map(|l| l.iter().sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.levels.iter().flatten().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.levels.iter().flatten().all(|&x| x >= 0)
    }

    pub fn flat(&self) -> Vec<i64> {
        self.levels.iter().flatten().copied().collect()
    }

    pub fn add(&self, other: &DegreeVector) -> DegreeVector {
        self.zip(other, |a, b| a + b)
    }

    pub fn scaled(&self, m: i64) -> DegreeVector {
        DegreeVector { levels: self.levels.iter().map(|l| l.iter().map(|x| x * m).collect()).collect() }
    }

    /// `self - other` if it stays in the lattice.
    pub fn checked_sub(&self, other: &DegreeVector) -> Option<DegreeVector> {
        let d = self.zip(other, |a, b| a - b);
        d.is_nonnegative().then_some(d)
    }

    fn zip(&self, other: &DegreeVector, f: impl Fn(i64, i64) -> i64) -> DegreeVector {
        assert_eq!(self.levels.len(), other.levels.len());
        DegreeVector {
            levels: self
                .levels
                .iter()
                .zip(&other.levels)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f(*x, *y)).collect())
                .collect(),
        }
    }

    /// Applies the permutation `perm` (1-based images) to the indices of level `i`.
    pub fn permute_level(&self, i: usize, perm: &[usize]) -> DegreeVector {
        let mut out = self.clone();
        for (s, &t) in perm.iter().enumerate() {
            out.levels[i - 1][t - 1] = self.levels[i - 1][s];
        }
        out
    }
}

impl Ord for DegreeVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| other.flat().cmp(&self.flat()))
    }
}

impl PartialOrd for DegreeVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.levels.iter().map(|l| l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")).collect();
        write!(f, "({})", parts.join("|"))
    }
}

/// Every `d >= 0` with `sum d_{ij} <= bound`, in the graded order.
pub fn enumerate_degrees(shape: &FlagShape, bound: i64) -> Vec<DegreeVector> {
    let slots = shape.num_roots();
    let mut out = Vec::new();
    let mut cur = vec![0i64; slots];
    for total in 0..=bound.max(-1) {
        compositions(&mut cur, 0, total, &mut |flat| {
            let mut levels = Vec::with_capacity(shape.n());
            let mut k = 0;
            for i in 1..=shape.n() {
                levels.push(flat[k..k + shape.dim(i)].to_vec());
                k += shape.dim(i);
            }
            out.push(DegreeVector { levels });
        });
    }
    out
}

/// Visits compositions of `rest` into the remaining slots, largest first.
fn compositions(cur: &mut [i64], pos: usize, rest: i64, visit: &mut impl FnMut(&[i64])) {
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        visit(cur);
        return;
    }
    for x in (0..=rest).rev() {
        cur[pos] = x;
        compositions(cur, pos + 1, rest - x, visit);
    }
    cur[pos] = 0;
}

/// X-degrees `delta` (one entry per level) with `sum delta <= bound`.
pub fn enumerate_x_degrees(shape: &FlagShape, bound: i64) -> Vec<Vec<i64>> {
    let n = shape.n();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    for total in 0..=bound.max(-1) {
        compositions(&mut cur, 0, total, &mut |flat| out.push(flat.to_vec()));
    }
    out
}
