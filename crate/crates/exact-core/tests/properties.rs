use exact_core::rational::{int, rat};
use exact_core::{
    eval_term, local_expand, residue_dq_over_q, EvalResult, FactoredTerm, Monomial, QSum, Rational, Specialization,
    VarId,
};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=7).prop_filter_map("nonzero", |(p, q)| if p == 0 { None } else { Some(rat(p, q)) })
}

fn vars() -> [VarId; 3] {
    [VarId::Y, VarId::MU, VarId::lambda(2, 1)]
}

/// A random term in q and three other variables.
fn term() -> impl Strategy<Value = FactoredTerm> {
    let mono = prop::collection::vec(-2i64..=2, 4).prop_map(|e| {
        let vs = vars();
        Monomial::from_pairs([(VarId::Q, e[0]), (vs[0], e[1]), (vs[1], e[2]), (vs[2], e[3])])
    });
    (small_rat(), mono.clone(), prop::collection::vec((mono, prop_oneof![Just(-1i64), Just(1), Just(2)]), 0..4))
        .prop_map(|(c, lead, fs)| {
            let mut t = FactoredTerm::monomial(c, lead);
            for (m, e) in fs {
                if !m.is_one() {
                    t.mul_factor(m, e);
                }
            }
            t
        })
}

fn spec() -> impl Strategy<Value = Specialization> {
    prop::collection::vec(small_rat(), 3).prop_map(|xs| {
        let mut s = Specialization::new();
        for (v, x) in vars().into_iter().zip(xs) {
            s.set(v, x).unwrap();
        }
        s
    })
}

proptest! {
    #[test]
    fn eval_is_multiplicative(a in term(), b in term(), s in spec(), q in small_rat()) {
        let ea = eval_term(&a, &q, &s).unwrap();
        let eb = eval_term(&b, &q, &s).unwrap();
        if let (EvalResult::Value(x), EvalResult::Value(y)) = (ea, eb) {
            prop_assert_eq!(eval_term(&a.mul(&b), &q, &s).unwrap(), EvalResult::Value(x * y));
        }
    }

    #[test]
    fn residue_matches_limit_oracle(g in term(), s in spec(), q0 in small_rat()) {
        // f = g / (1 - q/q0); the residue of f dq/q at q0 is -g(q0) when g is regular there
        let mut f = g.clone();
        f.mul_factor(Monomial::var(VarId::Q).mul(&Monomial::var(VarId::BETA)), -1);
        let mut s2 = s.clone();
        s2.set(VarId::BETA, q0.recip()).unwrap();
        if let EvalResult::Value(gv) = eval_term(&g, &q0, &s2).unwrap() {
            let (res, order) = residue_dq_over_q(&f.into(), &q0, &s2).unwrap();
            prop_assert_eq!(res, -gv);
            prop_assert_eq!(order, 1);
        }
    }

    #[test]
    fn expansion_of_product(a in term(), b in term(), s in spec(), q0 in small_rat()) {
        let w = (6, 3);
        let ea = local_expand(&a.clone().into(), &q0, &s, w);
        let eb = local_expand(&b.clone().into(), &q0, &s, w);
        let eab = local_expand(&a.mul(&b).into(), &q0, &s, (12, 3));
        if let (Ok(ea), Ok(eb), Ok(eab)) = (ea, eb, eab) {
            let prod = ea.mul(&eb);
            for k in prod.start()..prod.precision() {
                prop_assert_eq!(prod.coeff(k).unwrap(), eab.coeff(k).unwrap());
            }
        }
    }

    #[test]
    fn residue_ignores_term_order(ts in prop::collection::vec(term(), 1..5), s in spec(), q0 in small_rat()) {
        let fwd = QSum { terms: ts.clone() };
        let mut rev = ts;
        rev.reverse();
        let rev = QSum { terms: rev };
        let a = residue_dq_over_q(&fwd, &q0, &s);
        let b = residue_dq_over_q(&rev, &q0, &s);
        prop_assert_eq!(a, b);
    }
}

#[test]
fn residue_through_double_pole() {
    // 1/(1-q)^2 at q = 1: with q = 1+t it is t^-2, and dq/q = dt/(1+t), so the residue is -1
    let s: QSum = FactoredTerm::binomial(Monomial::var(VarId::Q), -2).into();
    let (res, order) = residue_dq_over_q(&s, &int(1), &Specialization::new()).unwrap();
    assert_eq!(order, 2);
    assert_eq!(res, int(-1));
}

#[test]
fn regular_sum_has_zero_residue() {
    let s: QSum = FactoredTerm::binomial(Monomial::var(VarId::Q), 3).into();
    let (res, order) = residue_dq_over_q(&s, &rat(1, 2), &Specialization::new()).unwrap();
    assert!(res.is_zero());
    assert_eq!(order, 0);
    let e = local_expand(&s, &int(1), &Specialization::new(), (0, 4)).unwrap();
    assert_eq!(e.valuation(), Some(3));
    assert!(!e.coeff(3).unwrap().is_one());
}
