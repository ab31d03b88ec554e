use std::collections::BTreeMap;

use exact_core::{FactoredTerm, Monomial, VarId};
use flag_geometry::{DegreeVector, FixedPointY, FlagShape};
use serde::{Deserialize, Serialize};

use crate::{edge_raw, OrbitDatum, RecursionError};

/// A chain of Y orbits starting at a nondegenerate point. Each index `j`
/// moves `f_j(1)` from 1 to 2 at the current node; the last index is `n`
/// for a full broken orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrokenOrbit {
    pub start: FixedPointY,
    /// Target character seed `(r, s)`; only `(2, 1)` is implemented.
    pub seed: (usize, usize),
    /// Breaking set, sorted.
    pub breaking: Vec<usize>,
    /// Node labels `A -> E_{j1} -> ... -> E_{j1..n}`.
    pub nodes: Vec<FixedPointY>,
}

impl BrokenOrbit {
    /// Component indices: the breaking set followed by the last index.
    pub fn indices(&self) -> Vec<usize> {
        let mut out = self.breaking.clone();
        out.push(self.start.maps.len());
        out
    }

    pub fn end(&self) -> &FixedPointY {
        self.nodes.last().expect("at least one node")
    }
}

fn chain(start: &FixedPointY, indices: &[usize]) -> Vec<FixedPointY> {
    let mut nodes = vec![start.clone()];
    for &j in indices {
        let cur = nodes.last().expect("nonempty");
        nodes.push(cur.with_map(j, 1, 2));
    }
    nodes
}

/// All `2^{n-1}` broken orbits of the `Λ_2/Λ_1` family at the distinguished
/// point, ordered by size of the breaking set and then lexicographically.
pub fn enumerate_broken(shape: &FlagShape) -> Vec<BrokenOrbit> {
    let n = shape.n();
    let start = FixedPointY::distinguished(shape);
    let mut sets: Vec<Vec<usize>> =
        (0u32..1 << (n - 1)).map(|mask| (1..n).filter(|j| mask & (1 << (j - 1)) != 0).collect()).collect();
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    sets.into_iter()
        .map(|breaking| {
            let mut idx = breaking.clone();
            idx.push(n);
            let nodes = chain(&start, &idx);
            BrokenOrbit { start: start.clone(), seed: (2, 1), breaking, nodes }
        })
        .collect()
}

/// One irreducible piece of a broken orbit.
#[derive(Clone, Debug)]
pub struct Component {
    pub orbit: OrbitDatum,
    /// `λ^{1/m}` in cover variables.
    pub u: Monomial,
    /// Twisted edge term with every trivial weight skipped.
    pub edge: FactoredTerm,
    /// Raw trivial weights of the pushforward before the reparametrization.
    pub trivial_phi: i64,
}

#[derive(Clone, Debug)]
pub struct BrokenCoeff {
    pub term: FactoredTerm,
    pub components: Vec<Component>,
    pub end: FixedPointY,
    pub u_end: Monomial,
    /// Novikov weight `m * sum D` over the components.
    pub novikov: DegreeVector,
}

fn components(
    shape: &FlagShape,
    start: &FixedPointY,
    indices: &[usize],
    m: u32,
) -> Result<Vec<Component>, RecursionError> {
    let mut cur = start.clone();
    let mut out = Vec::new();
    for &j in indices {
        let orbit = OrbitDatum::y_orbit(shape, &cur, j, 1, 2, m)?;
        let (edge, tan, tw) = edge_raw(&orbit, true)?;
        if tan.trivial_a != 0 {
            return Err(RecursionError::ZeroDenominator(format!("{} trivial tangent weights at {cur}", tan.trivial_a)));
        }
        if let Some(tw) = tw {
            if tw.trivial_a != 0 || tw.trivial_phi != 0 {
                return Err(RecursionError::ZeroDenominator(format!("trivial twisting weight on component {j}")));
            }
        }
        cur = cur.with_map(j, 1, 2);
        out.push(Component { u: orbit.root(), orbit, edge, trivial_phi: tan.trivial_phi });
    }
    Ok(out)
}

/// Chain coefficient from `start` along `indices`:
/// `1/(1 - q/u_1) prod_a edge_a prod_{a>=2} 1/(1 - u_{a-1}/u_a)`.
/// Every component's reparametrization weight is paired with one trivial
/// pushforward weight; the pairing must be exact.
pub fn chain_coeff(
    shape: &FlagShape,
    start: &FixedPointY,
    indices: &[usize],
    m: u32,
) -> Result<BrokenCoeff, RecursionError> {
    if indices.is_empty() {
        return Err(RecursionError::Invalid("empty chain".into()));
    }
    let comps = components(shape, start, indices, m)?;
    let found: i64 = comps.iter().map(|c| c.trivial_phi).sum();
    let expected = comps.len() as i64;
    if found != expected {
        return Err(RecursionError::UnpairedZero { found, expected });
    }
    let mut term = FactoredTerm::one();
    let q = Monomial::var(VarId::Q);
    term.mul_factor(q.div(&comps[0].u), -1);
    let mut novikov = DegreeVector::zero(shape);
    for (k, c) in comps.iter().enumerate() {
        term.mul_assign(&c.edge);
        if k > 0 {
            term.mul_factor(comps[k - 1].u.div(&c.u), -1);
        }
        novikov = novikov.add(&c.orbit.degree.scaled(m as i64));
    }
    let mut end = start.clone();
    for &j in indices {
        end = end.with_map(j, 1, 2);
    }
    let u_end = comps.last().expect("nonempty").u.clone();
    Ok(BrokenCoeff { term, components: comps, end, u_end, novikov })
}

/// The broken-orbit coefficient of a full chain ending at level `n`.
pub fn coeff_broken(shape: &FlagShape, orbit: &BrokenOrbit, m: u32) -> Result<BrokenCoeff, RecursionError> {
    if orbit.seed != (2, 1) {
        return Err(RecursionError::Invalid(format!("seed {:?} is not implemented", orbit.seed)));
    }
    chain_coeff(shape, &orbit.start, &orbit.indices(), m)
}

/// `Coeff(I ∪ J) = Coeff(I) * Coeff(J)|_{q = u_last(I)}` for the split of
/// `indices` after position `split`, compared as factored terms.
pub fn compose_check(
    shape: &FlagShape,
    start: &FixedPointY,
    indices: &[usize],
    split: usize,
    m: u32,
) -> Result<bool, RecursionError> {
    if split == 0 || split >= indices.len() {
        return Err(RecursionError::Invalid("split must leave both parts nonempty".into()));
    }
    let whole = chain_coeff(shape, start, indices, m)?;
    let first = chain_coeff(shape, start, &indices[..split], m)?;
    let second = chain_coeff(shape, &first.end, &indices[split..], m)?;
    let at = BTreeMap::from([(VarId::Q, first.u_end.clone())]);
    let glued = first.term.mul(&second.term.substitute(&at));
    Ok(glued == whole.term)
}
