use exact_core::{qprod, FactoredTerm, Monomial, VarId};
use flag_geometry::{DegreeVector, FlagShape};

use crate::SeriesVariant;

fn p(i: usize, s: usize) -> Monomial {
    Monomial::var(VarId::p(i, s))
}

fn lam(a: usize, r: usize) -> Monomial {
    Monomial::var(VarId::lambda(a, r))
}

fn ratio(a: &Monomial, b: &Monomial) -> Monomial {
    a.div(b)
}

fn with_q(m: &Monomial, l: i64) -> Monomial {
    exact_core::q_shift(m, l)
}

/// `P_{i+1,r}` on `X`; `Λ_r` at the top level.
fn upper_root_x(shape: &FlagShape, i: usize, r: usize) -> Monomial {
    if i < shape.n() {
        p(i + 1, r)
    } else {
        lam(shape.n() + 1, r)
    }
}

/// `P_{i+1,r} Λ_{i+1,r}` on `Y`, with `P_{n+1,r} = 1`.
fn upper_root_y(shape: &FlagShape, i: usize, r: usize) -> Monomial {
    if i < shape.n() {
        p(i + 1, r).mul(&lam(i + 1, r))
    } else {
        lam(i + 1, r)
    }
}

/// `prod_{l=1}^{d_is - d_ir} (1 - c P_is/P_ir q^l)` over ordered pairs `r != s`.
fn pair_numerators(shape: &FlagShape, d: &DegreeVector, coef: &Monomial) -> FactoredTerm {
    let mut t = FactoredTerm::one();
    for (i, s) in shape.slots() {
        for r in (1..=shape.dim(i)).filter(|&r| r != s) {
            let base = coef.mul(&ratio(&p(i, s), &p(i, r)));
            t.mul_assign(&qprod(1, d.get(i, s) - d.get(i, r), |l| with_q(&base, l)));
        }
    }
    t
}

/// `1 / prod_{l=1}^{d_is - d_{i+1,r}} (1 - P_is/U_{i+1,r} q^l)`.
fn level_denominators(shape: &FlagShape, d: &DegreeVector, upper: impl Fn(usize, usize) -> Monomial) -> FactoredTerm {
    let mut t = FactoredTerm::one();
    for (i, s) in shape.slots() {
        for r in 1..=shape.dim(i + 1) {
            let base = ratio(&p(i, s), &upper(i, r));
            let k = d.get(i, s) - d.get(i + 1, r);
            t.mul_assign(&qprod(1, k, |l| with_q(&base, l)).inv().expect("binomial product"));
        }
    }
    t
}

/// The Q^d coefficient of `J/(1-q)` for `variant`.
pub fn coefficient(shape: &FlagShape, variant: SeriesVariant, d: &DegreeVector) -> FactoredTerm {
    match variant {
        SeriesVariant::UntwistedY => level_denominators(shape, d, |i, r| upper_root_y(shape, i, r)),
        SeriesVariant::TwY => {
            let mut t = pair_numerators(shape, d, &Monomial::var(VarId::Y));
            t.mul_assign(&level_denominators(shape, d, |i, r| upper_root_y(shape, i, r)));
            t
        }
        SeriesVariant::XSmall => x_small(shape, d),
        SeriesVariant::EuDualTaut { i } => x_small(shape, d).mul(&box_inv(shape, i, d)),
        SeriesVariant::EuTaut { i } => {
            let mut t = x_small(shape, d);
            let mu_inv = Monomial::var_pow(VarId::MU, -1);
            for s in 1..=shape.dim(i) {
                let base = mu_inv.mul(&p(i, s).inv());
                let f = qprod(0, d.get(i, s) - 1, |l| with_q(&base, -l));
                t.mul_assign(&f.inv().expect("binomial product"));
            }
            t
        }
        SeriesVariant::Cotangent => x_small(shape, d).mul(&cotangent_factor(shape, d)),
        SeriesVariant::Level { i, l } => {
            let mut t = x_small(shape, d);
            t.mul_monomial(&level_monomial(shape, i, l, d));
            t
        }
    }
}

/// Small J-function of `X` at `d`.
pub fn x_small(shape: &FlagShape, d: &DegreeVector) -> FactoredTerm {
    let mut t = pair_numerators(shape, d, &Monomial::one());
    t.mul_assign(&level_denominators(shape, d, |i, r| upper_root_x(shape, i, r)));
    t
}

/// `prod_s prod_{l=1}^{d_is} (1 - mu P_is q^l)`.
pub fn box_inv(shape: &FlagShape, i: usize, d: &DegreeVector) -> FactoredTerm {
    let mut t = FactoredTerm::one();
    for s in 1..=shape.dim(i) {
        let base = Monomial::var(VarId::MU).mul(&p(i, s));
        t.mul_assign(&qprod(1, d.get(i, s), |l| with_q(&base, l)));
    }
    t
}

/// `prod_{l=1}^{d_is - d_ir} (1 - y P_is/P_ir q^l)`.
pub fn gamma_inv(i: usize, r: usize, s: usize, d: &DegreeVector) -> FactoredTerm {
    let base = Monomial::from_pairs([(VarId::Y, 1), (VarId::p(i, s), 1), (VarId::p(i, r), -1)]);
    qprod(1, d.get(i, s) - d.get(i, r), |l| with_q(&base, l))
}

/// `[prod_s P_is^{d_is} q^{d_is (d_is - 1)/2}]^l`.
pub fn level_monomial(shape: &FlagShape, i: usize, l: i64, d: &DegreeVector) -> Monomial {
    let mut m = Monomial::one();
    for s in 1..=shape.dim(i) {
        let ds = d.get(i, s);
        m.mul_var(VarId::p(i, s), ds * l);
        m.mul_var(VarId::Q, ds * (ds - 1) / 2 * l);
    }
    m
}

/// Extra factor of the cotangent twist.
pub fn cotangent_factor(shape: &FlagShape, d: &DegreeVector) -> FactoredTerm {
    let hbar = Monomial::var(VarId::HBAR);
    let mut t = FactoredTerm::one();
    for (i, s) in shape.slots() {
        for r in 1..=shape.dim(i + 1) {
            let base = hbar.mul(&ratio(&p(i, s), &upper_root_x(shape, i, r)));
            t.mul_assign(&qprod(0, d.get(i, s) - d.get(i + 1, r) - 1, |l| with_q(&base, l)));
        }
        for r in (1..=shape.dim(i)).filter(|&r| r != s) {
            let base = hbar.mul(&ratio(&p(i, s), &p(i, r)));
            let f = qprod(0, d.get(i, s) - d.get(i, r) - 1, |l| with_q(&base, l));
            t.mul_assign(&f.inv().expect("binomial product"));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_core::rational::int;

    #[test]
    fn p1_degree_one() {
        let sh: FlagShape = "1:2".parse().unwrap();
        let d = DegreeVector::from_levels(vec![vec![1]]);
        let t = x_small(&sh, &d);
        let mut expect = FactoredTerm::one();
        for r in 1..=2 {
            let m = Monomial::from_pairs([(VarId::p(1, 1), 1), (VarId::lambda(2, r), -1), (VarId::Q, 1)]);
            expect.mul_factor(m, -1);
        }
        assert_eq!(t, expect);
    }

    #[test]
    fn zero_degree_is_one() {
        for sh in ["1:2", "1,2:3", "2:4"] {
            let sh: FlagShape = sh.parse().unwrap();
            let z = DegreeVector::zero(&sh);
            for v in [
                SeriesVariant::TwY,
                SeriesVariant::UntwistedY,
                SeriesVariant::XSmall,
                SeriesVariant::Cotangent,
                SeriesVariant::EuTaut { i: 1 },
                SeriesVariant::EuDualTaut { i: 1 },
                SeriesVariant::Level { i: 1, l: 2 },
            ] {
                assert_eq!(coefficient(&sh, v, &z), FactoredTerm::one(), "{v}");
            }
        }
    }

    #[test]
    fn level_example() {
        let sh: FlagShape = "1:2".parse().unwrap();
        let d = DegreeVector::from_levels(vec![vec![2]]);
        let lv = coefficient(&sh, SeriesVariant::Level { i: 1, l: 1 }, &d);
        let mut x = x_small(&sh, &d);
        x.mul_monomial(&Monomial::from_pairs([(VarId::p(1, 1), 2), (VarId::Q, 1)]));
        assert_eq!(lv, x);
        assert_eq!(lv.scalar, int(1));
    }

    #[test]
    fn negative_range_goes_to_denominator() {
        let sh: FlagShape = "2:3".parse().unwrap();
        let d = DegreeVector::from_levels(vec![vec![0, 2]]);
        let t = x_small(&sh, &d);
        // pair (s, r) = (1, 2): d_11 - d_12 = -2 gives 1/((1 - P11/P12 q^{-1})(1 - P11/P12))
        let base = Monomial::from_pairs([(VarId::p(1, 1), 1), (VarId::p(1, 2), -1)]);
        assert_eq!(t.factor_exponent(&base), -1);
        assert_eq!(t.factor_exponent(&with_q(&base, -1)), -1);
        let other = base.inv();
        assert_eq!(t.factor_exponent(&with_q(&other, 1)), 1);
        assert_eq!(t.factor_exponent(&with_q(&other, 2)), 1);
    }
}
