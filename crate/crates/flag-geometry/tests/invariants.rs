use std::collections::BTreeMap;

use exact_core::Monomial;
use flag_geometry::*;
use proptest::prelude::*;

fn shapes_n4() -> Vec<FlagShape> {
    ["1:2", "1:3", "2:3", "1,2:3", "1:4", "2:4", "3:4", "1,2:4", "1,3:4", "2,3:4", "1,2,3:4"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn fact(n: usize) -> usize {
    (1..=n).product()
}

fn multiset(ms: impl IntoIterator<Item = Monomial>) -> BTreeMap<Monomial, usize> {
    let mut out = BTreeMap::new();
    for m in ms {
        *out.entry(m).or_insert(0) += 1;
    }
    out
}

#[test]
fn fixed_point_counts() {
    for sh in shapes_n4() {
        let xs = fixed_points_x(&sh);
        let expect: usize = (1..=sh.n()).map(|i| binom(sh.dim(i + 1), sh.dim(i))).product();
        assert_eq!(xs.len(), expect, "{sh}");
        let ys = fixed_points_y(&sh);
        let total: usize = (1..=sh.n()).map(|i| sh.dim(i + 1).pow(sh.dim(i) as u32)).product();
        assert_eq!(ys.len(), total, "{sh}");
        let weyl: usize = sh.dims().iter().map(|&v| fact(v)).product();
        assert_eq!(ys.iter().filter(|y| y.is_nondegenerate()).count(), weyl * xs.len(), "{sh}");
    }
}

#[test]
fn listed_examples() {
    let f: FlagShape = "1,2:3".parse().unwrap();
    assert_eq!(fixed_points_x(&f).len(), 6);
    let ys = fixed_points_y(&f);
    assert_eq!((ys.len(), ys.iter().filter(|y| y.is_nondegenerate()).count()), (18, 12));
    let a = FixedPointY::distinguished(&f);
    assert!(ys.contains(&a) && a.is_nondegenerate());
    assert_eq!(restrict_p_y(&f, &a, 2, 2).to_string(), "L_3_2");
    let e2 = a.with_map(2, 1, 2);
    assert_eq!(restrict_p_y(&f, &e2, 2, 1).to_string(), "L_3_2");
    let g: FlagShape = "2:4".parse().unwrap();
    let x = FixedPointX::new(&g, vec![vec![2, 4]]).unwrap();
    let roots: Vec<String> = restrict_p_x(&g, &x, 1).iter().map(|m| m.to_string()).collect();
    assert_eq!(roots, ["L_2_2", "L_2_4"]);
}

#[test]
fn y_tangent_descends_to_x_tangent() {
    for sh in shapes_n4() {
        for fp in fixed_points_y(&sh).into_iter().filter(|f| f.is_nondegenerate()) {
            let x = fp.descend(&sh).unwrap();
            let ty = tangent_chars_y(&sh, &fp);
            assert_eq!(ty.chars.len(), sh.dim_y());
            assert!(ty.chars.iter().all(|c| !c.chr.is_one()));
            // remove the twisting directions, then compare after descent
            let mut ys = multiset(ty.chars.iter().map(|c| descend_monomial(&sh, &c.chr)));
            for t in twist_chars_y(&sh, &fp) {
                let k = descend_monomial(&sh, &t.chr);
                let slot = ys.get_mut(&k).expect("twisting character present");
                *slot -= 1;
            }
            ys.retain(|_, c| *c > 0);
            let xs = multiset(tangent_chars_x(&sh, &x).into_iter().map(|c| c.chr));
            assert_eq!(ys, xs, "{sh} {fp}");
            assert_eq!(tangent_chars_x(&sh, &x).len(), sh.dim_x());
        }
    }
}

#[test]
fn signed_tx_roots_match_characters() {
    for sh in shapes_n4() {
        for x in fixed_points_x(&sh) {
            let signed = tx_chars_signed(&sh, &x);
            assert!(signed.iter().all(|(_, c)| *c == 1));
            let a = multiset(signed.into_iter().map(|(m, _)| m));
            let b = multiset(tangent_chars_x(&sh, &x).into_iter().map(|c| c.chr));
            assert_eq!(a, b);
        }
    }
}

#[test]
fn distinguished_point_gives_lambda() {
    for sh in shapes_n4() {
        assert!(check_lambda_at_distinguished(&sh));
    }
}

#[test]
fn degenerate_points_only_report() {
    let f: FlagShape = "1,2:3".parse().unwrap();
    for fp in fixed_points_y(&f).into_iter().filter(|f| !f.is_nondegenerate()) {
        let t = tangent_chars_y(&f, &fp);
        assert_eq!(t.chars.len(), f.dim_y());
        assert!(matches!(t.report(), Some(GeometryError::DegenerateTrivialChar(_))));
    }
}

proptest! {
    #[test]
    fn degree_count_is_stars_and_bars(idx in 0usize..11, bound in 0i64..4) {
        let sh = &shapes_n4()[idx];
        let k = sh.num_roots();
        let ds = enumerate_degrees(sh, bound);
        prop_assert_eq!(ds.len(), binom(k + bound as usize, k));
        prop_assert!(ds.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn lifted_labeling_descends_back(idx in 0usize..11, pick in 0usize..64) {
        let sh = &shapes_n4()[idx];
        let xs = fixed_points_x(sh);
        let x = &xs[pick % xs.len()];
        let y = x.lift(sh);
        prop_assert!(y.is_nondegenerate());
        prop_assert_eq!(y.descend(sh).unwrap(), x.clone());
    }

    #[test]
    fn shape_round_trips(idx in 0usize..11) {
        let sh = &shapes_n4()[idx];
        prop_assert_eq!(sh.to_string().parse::<FlagShape>().unwrap(), sh.clone());
        prop_assert_eq!(sh.dual().dual(), sh.clone());
    }
}
