use exact_core::rational::int;
use exact_core::{FactoredTerm, Monomial, QSum, VarId};
use flag_geometry::{DegreeVector, FlagShape};
use serde::{Deserialize, Serialize};

use crate::coeff::{box_inv, gamma_inv, level_monomial};

/// One term `coeff * Q^shift * prod (P_ij q^{Q_ij d/dQ_ij})^k` of a
/// [`DifferenceOp::Poly`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coeff: i64,
    pub shift: DegreeVector,
    /// `(i, j, k)` triples.
    pub ops: Vec<(usize, usize, i64)>,
}

/// Termwise operators acting on the `Q^d` coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "op")]
pub enum DifferenceOp {
    /// Multiply by `(P_ij q^{d_ij})^k`.
    Monomial {
        i: usize,
        j: usize,
        k: i64,
    },
    Poly {
        terms: Vec<PolyTerm>,
    },
    /// Multiply by `prod_{l=1}^{d_is - d_ir} (1 - y P_is/P_ir q^l)`.
    GammaInv {
        i: usize,
        r: usize,
        s: usize,
    },
    /// Inverse of `GammaInv`.
    Gamma {
        i: usize,
        r: usize,
        s: usize,
    },
    /// Multiply by `prod_s prod_{l=1}^{d_is} (1 - mu P_is q^l)`.
    BoxInv {
        i: usize,
    },
    /// Inverse of `BoxInv`.
    Box {
        i: usize,
    },
    /// Multiply by `[prod_s P_is^{d_is} q^{d_is(d_is-1)/2}]^l`.
    LevelMul {
        i: usize,
        l: i64,
    },
}

fn monomial_op(i: usize, j: usize, k: i64, d: &DegreeVector) -> Monomial {
    Monomial::from_pairs([(VarId::p(i, j), k), (VarId::Q, d.get(i, j) * k)])
}

impl DifferenceOp {
    /// The inverse operator, when it is again a single termwise factor.
    pub fn inverse(&self) -> Option<DifferenceOp> {
        Some(match *self {
            DifferenceOp::Monomial { i, j, k } => DifferenceOp::Monomial { i, j, k: -k },
            DifferenceOp::GammaInv { i, r, s } => DifferenceOp::Gamma { i, r, s },
            DifferenceOp::Gamma { i, r, s } => DifferenceOp::GammaInv { i, r, s },
            DifferenceOp::BoxInv { i } => DifferenceOp::Box { i },
            DifferenceOp::Box { i } => DifferenceOp::BoxInv { i },
            DifferenceOp::LevelMul { i, l } => DifferenceOp::LevelMul { i, l: -l },
            DifferenceOp::Poly { .. } => return None,
        })
    }

    /// Factor multiplying the coefficient at `d`; `None` for `Poly`, which
    /// mixes degrees.
    pub fn factor_at(&self, shape: &FlagShape, d: &DegreeVector) -> Option<FactoredTerm> {
        Some(match *self {
            DifferenceOp::Monomial { i, j, k } => FactoredTerm::monomial(int(1), monomial_op(i, j, k, d)),
            DifferenceOp::GammaInv { i, r, s } => gamma_inv(i, r, s, d),
            DifferenceOp::Gamma { i, r, s } => gamma_inv(i, r, s, d).inv()?,
            DifferenceOp::BoxInv { i } => box_inv(shape, i, d),
            DifferenceOp::Box { i } => box_inv(shape, i, d).inv()?,
            DifferenceOp::LevelMul { i, l } => FactoredTerm::monomial(int(1), level_monomial(shape, i, l, d)),
            DifferenceOp::Poly { .. } => return None,
        })
    }

    /// New coefficient at `d` given the old coefficients.
    pub fn act(&self, shape: &FlagShape, d: &DegreeVector, old: impl Fn(&DegreeVector) -> Option<QSum>) -> QSum {
        match self {
            DifferenceOp::Poly { terms } => {
                let mut out = QSum::zero();
                for t in terms {
                    let Some(src) = d.checked_sub(&t.shift) else { continue };
                    let Some(c) = old(&src) else { continue };
                    let mut m = Monomial::one();
                    for &(i, j, k) in &t.ops {
                        m = m.mul(&monomial_op(i, j, k, &src));
                    }
                    let f = FactoredTerm::monomial(int(t.coeff), m);
                    out.add_assign(&c.mul_term(&f));
                }
                out
            }
            _ => {
                let f = self.factor_at(shape, d).expect("termwise operator");
                old(d).map(|c| c.mul_term(&f)).unwrap_or_else(QSum::zero)
            }
        }
    }
}
