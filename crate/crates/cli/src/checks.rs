use exact_core::rational::{int, rat};
use exact_core::{degree_hint, exact_equal, qsum_equal, FactoredTerm, Monomial, QSum, Specialization, VarId};
use flag_geometry::{enumerate_x_degrees, fixed_points_x, fixed_points_y, lambda_top, x_restriction, FlagShape};
use j_series::{build, descend, weyl_check, SeriesVariant};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use recursion_engine::{
    all_x_orbits, check_vanishing, nondegenerate_y_orbits, residue_at, verify_recursion, OrbitDatum,
};
use serde_json::{json, Value};
use verification_suite::{level_duality_report, p1_residue_pairing, pairing_value, small_j_property, PairingQuery};

use crate::output::{Report, Row};
use crate::{parse, Check, ResidueArgs, RunConfig};

fn err(e: impl ToString) -> String {
    e.to_string()
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, String> {
    serde_json::to_value(v).map_err(err)
}

pub fn run(check: Check, cfg: &RunConfig) -> Result<Report, String> {
    if cfg.bound < 0 || cfg.m == 0 || cfg.trials == 0 {
        return Err("bound must be nonnegative, m and trials positive".into());
    }
    match check {
        Check::Recursion => recursion(cfg),
        Check::Vanishing => vanishing(cfg),
        Check::Weyl => weyl(cfg),
        Check::DegreeGap => degree_gap(cfg),
        Check::Pairing => pairing(cfg),
        Check::LevelDuality => level_duality(cfg),
        Check::Descent => descent(cfg),
    }
}

fn recursion(cfg: &RunConfig) -> Result<Report, String> {
    let variant = parse::variant(&cfg.variant, "x-small")?;
    let series = build(&cfg.shape, variant, cfg.bound).map_err(err)?;
    let orbits: Vec<OrbitDatum> =
        if variant.is_y_side() { nondegenerate_y_orbits(&cfg.shape, cfg.m) } else { all_x_orbits(&cfg.shape, cfg.m) };
    let reports = orbits
        .par_iter()
        .enumerate()
        .map(|(k, o)| verify_recursion(&series, o, cfg.bound, cfg.seed.wrapping_add(k as u64)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(err)?;
    let rows = orbits
        .iter()
        .zip(&reports)
        .map(|(o, r)| {
            let (i, s, t) = o.label;
            Row::new(format!("{} -> {} ({i},{s},{t})", o.a, o.b), r.entries.len(), r.pass)
        })
        .collect();
    Ok(Report::new("verify recursion", &cfg.shape, Some(cfg.seed), rows, to_value(&reports)?))
}

fn vanishing(cfg: &RunConfig) -> Result<Report, String> {
    let r = check_vanishing(&cfg.shape, cfg.m, cfg.bound, cfg.seed).map_err(err)?;
    let mut rows: Vec<Row> = r
        .vanishing
        .iter()
        .map(|e| Row::new(format!("y=1 sum at {}", e.end_degree), e.at_y1.as_deref().unwrap_or("singular"), e.pass))
        .collect();
    rows.extend(r.reduction.iter().map(|e| {
        Row::new(format!("reduction at {:?}", e.x_degree), e.y_side.as_deref().unwrap_or("singular"), e.pass)
    }));
    rows.push(Row::new("broken orbits", r.broken_orbits, r.pass));
    Ok(Report::new("verify vanishing", &cfg.shape, Some(cfg.seed), rows, to_value(&r)?))
}

fn weyl(cfg: &RunConfig) -> Result<Report, String> {
    let variant = parse::variant(&cfg.variant, "tw-y")?;
    let mut series = build(&cfg.shape, variant, cfg.bound).map_err(err)?;
    if variant.is_y_side() {
        series = descend(&series).map_err(err)?;
    }
    let r = weyl_check(&series, cfg.bound, cfg.trials, cfg.seed).map_err(err)?;
    let rows = r
        .entries
        .iter()
        .map(|e| {
            Row::new(format!("{:?} level {} swap {}<->{}", e.degree, e.level, e.swap.0, e.swap.1), variant, e.pass)
        })
        .collect();
    Ok(Report::new("verify weyl", &cfg.shape, Some(cfg.seed), rows, to_value(&r)?))
}

fn degree_gap(cfg: &RunConfig) -> Result<Report, String> {
    let r = small_j_property(&cfg.shape, cfg.bound);
    let rows = r
        .entries
        .iter()
        .map(|e| {
            let lit = e.literal.iter().flatten();
            let ok = e.s >= 1 && lit.clone().all(|g| *g == e.s);
            Row::new(e.d.to_string(), e.s, ok)
        })
        .collect();
    Ok(Report::new("verify degree-gap", &cfg.shape, None, rows, to_value(&r)?))
}

fn pairing(cfg: &RunConfig) -> Result<Report, String> {
    let shape = &cfg.shape;
    let q = PairingQuery { shape: shape.clone(), f: QSum::one(), g: QSum::one() };
    let v = pairing_value(&q, cfg.seed).map_err(err)?;
    let mut rows = vec![Row::new("<O,O>", &v, v == int(1))];
    if shape.n() == 1 && shape.dim(1) == 1 {
        for e in -2..=2 {
            let f = QSum::from(FactoredTerm::monomial(int(1), Monomial::var_pow(VarId::p(1, 1), e)));
            let q = PairingQuery { shape: shape.clone(), f: f.clone(), g: QSum::one() };
            let fixed = pairing_value(&q, cfg.seed).map_err(err)?;
            let res = p1_residue_pairing(shape, &f, cfg.seed).map_err(err)?;
            rows.push(Row::new(format!("<P^{e},O> residue form"), &res, res == fixed));
        }
    }
    Ok(Report::new("verify pairing", shape, Some(cfg.seed), rows, Value::Null))
}

fn level_duality(cfg: &RunConfig) -> Result<Report, String> {
    let i = cfg.variant.level_i.unwrap_or(1);
    let l = cfg.variant.level_l.unwrap_or(1);
    let r = level_duality_report(&cfg.shape, i, l, cfg.bound, cfg.seed).map_err(err)?;
    let rows = r
        .entries
        .iter()
        .map(|e| {
            let value = match &e.ratio {
                Some(m) => format!("{}*{}", m.coeff, m.monomial),
                None => e.note.clone().unwrap_or_default(),
            };
            Row::new(
                format!("{} ~ {} at {:?}", e.point, e.dual_point, e.x_degree),
                value,
                e.note.as_deref() != Some("RATIO_NOT_MONOMIAL"),
            )
        })
        .collect();
    Ok(Report::new("verify level-duality", &cfg.shape, Some(cfg.seed), rows, to_value(&r)?))
}

fn descent(cfg: &RunConfig) -> Result<Report, String> {
    let shape = &cfg.shape;
    let down = descend(&build(shape, SeriesVariant::TwY, cfg.bound).map_err(err)?).map_err(err)?;
    let x = build(shape, SeriesVariant::XSmall, cfg.bound).map_err(err)?.regroup_by_x_degree().map_err(err)?;
    let deltas = enumerate_x_degrees(shape, cfg.bound);
    let rows = deltas
        .par_iter()
        .enumerate()
        .map(|(k, delta)| -> Result<Row, String> {
            let empty = QSum::zero();
            let a = down.x_coeff(delta).unwrap_or(&empty);
            let b = x.x_coeff(delta).unwrap_or(&empty);
            let mut ok =
                qsum_equal(a, b, degree_hint(a, b), cfg.trials, cfg.seed.wrapping_add(k as u64)).map_err(err)?;
            let mut how = format!("{} trials", cfg.trials);
            if shape.ambient() == 2 {
                let exact = exact_equal(a, b, 1 << 14).map_err(err)?;
                ok &= exact != Some(false);
                if exact.is_some() {
                    how.push_str(" + expansion");
                }
            }
            Ok(Row::new(format!("{delta:?}"), how, ok))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Report::new("verify descent", shape, Some(cfg.seed), rows, Value::Null))
}

pub fn residue(a: &ResidueArgs) -> Result<Report, String> {
    let shape = &a.shape;
    let variant = parse::variant(&a.variant, "x-small")?;
    if variant.is_y_side() {
        return Err("residue works on series of X".into());
    }
    if a.m == 0 || a.bound < 0 {
        return Err("m must be positive and bound nonnegative".into());
    }
    let points = fixed_points_x(shape);
    let point =
        points.get(a.point).ok_or_else(|| format!("fixed point index {} out of range 0..{}", a.point, points.len()))?;
    let lambda = match (&a.pole, &a.lambda) {
        (Some((i, r, s)), _) => OrbitDatum::x_orbit(shape, point, *i, *s, *r, 1).map_err(err)?.lambda,
        (None, Some(m)) => m.clone(),
        (None, None) => return Err("give --pole i,r,s or --lambda".into()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut spec = Specialization::new();
    let mut seen = Vec::new();
    for t in 1..=shape.ambient() {
        let x = loop {
            let c = rat(rng.gen_range(1..=97), rng.gen_range(1..=97));
            let x = if a.power_spec { exact_core::rational::pow(&c, a.m as i64) } else { c };
            if !seen.contains(&x) {
                break x;
            }
        };
        seen.push(x.clone());
        let v = lambda_top(shape, t).vars().next().expect("one variable");
        spec.set(v, x).map_err(err)?;
    }
    let series = build(shape, variant, a.bound).map_err(err)?;
    let (q0, entries) = residue_at(&series, &x_restriction(shape, point), &lambda, a.m, &spec).map_err(err)?;
    let rows = entries.iter().map(|e| Row::new(e.degree.to_string(), &e.residue, true)).collect();
    let detail = json!({
        "point": point.to_string(),
        "lambda": lambda,
        "m": a.m,
        "q0": q0.to_string(),
        "specialization": spec,
        "entries": entries,
    });
    Ok(Report::new("residue", shape, Some(a.seed), rows, detail))
}

pub fn list(shape: &FlagShape, m: u32) -> Result<Report, String> {
    if m == 0 {
        return Err("m must be positive".into());
    }
    let mut rows = Vec::new();
    let xs = fixed_points_x(shape);
    for (k, p) in xs.iter().enumerate() {
        rows.push(Row::new(format!("x-point {k}"), p, true));
    }
    for (k, p) in fixed_points_y(shape).iter().enumerate().filter(|(_, p)| p.is_nondegenerate()) {
        rows.push(Row::new(format!("y-point {k}"), p, true));
    }
    for (k, o) in all_x_orbits(shape, m).iter().enumerate() {
        let (i, s, r) = o.label;
        let a = xs.iter().position(|p| flag_geometry_point(&o.a) == Some(p)).unwrap_or(usize::MAX);
        rows.push(Row::new(
            format!("x-orbit {k}"),
            format!("point {a} pole {i},{r},{s} lambda {} degree {}", o.lambda, o.degree),
            true,
        ));
    }
    for i in 1..=shape.n() {
        for s in 1..=shape.dim(i) {
            for t in (s + 1)..=shape.dim(i) {
                rows.push(Row::new(format!("weyl level {i}"), format!("P_{i}_{s}<->P_{i}_{t}"), true));
            }
        }
    }
    Ok(Report::new("list", shape, None, rows, Value::Null))
}

fn flag_geometry_point(p: &recursion_engine::FixedPoint) -> Option<&flag_geometry::FixedPointX> {
    match p {
        recursion_engine::FixedPoint::X(x) => Some(x),
        _ => None,
    }
}
