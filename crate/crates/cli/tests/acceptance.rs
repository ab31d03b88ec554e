//! One PASS/FAIL line per acceptance criterion. Every tolerance is pinned
//! below; exact comparisons have none.

use std::process::{Command, ExitCode, Stdio};
use std::time::Instant;

use exact_core::rational::{int, pow};
use exact_core::{degree_hint, exact_equal, failure_bound, qsum_equal, FactoredTerm, Monomial, QSum, VarId};
use flag_geometry::{enumerate_x_degrees, FlagShape};
use j_series::{build, cotangent_balance, descend, level_matches_x_small, weyl_check, SeriesVariant};
use recursion_engine::{all_x_orbits, check_vanishing, gamma_edge_identity, nondegenerate_y_orbits, verify_recursion};
use verification_suite::{
    all_shapes, level_duality_report, p1_residue_pairing, pairing_value, small_j_property, PairingQuery,
};

/// Random trials per identity test.
const TRIALS: u32 = 20;
/// Largest monomial count allowed in a full expansion.
const EXPANSION_LIMIT: usize = 1 << 14;
/// Sampled identities must have a false-positive bound of at most
/// `10^-MAX_FALSE_POSITIVE_EXP`.
const MAX_FALSE_POSITIVE_EXP: i64 = 40;
const SEED: u64 = 7;

fn sh(s: &str) -> FlagShape {
    s.parse().unwrap()
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn sampling_ok(hint: u64) -> Result<(), String> {
    let p = failure_bound(hint, TRIALS);
    let tol = pow(&int(10), -MAX_FALSE_POSITIVE_EXP);
    ensure(p <= tol, format!("false positive bound {p} above 1e-{MAX_FALSE_POSITIVE_EXP}"))
}

fn descent() -> Outcome {
    let mut checked = 0;
    let mut worst = 0;
    for (s, bound) in [("1:2", 3), ("1,2:3", 3), ("2:4", 3)] {
        let shape = sh(s);
        let down = descend(&build(&shape, SeriesVariant::TwY, bound).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let x = build(&shape, SeriesVariant::XSmall, bound).unwrap().regroup_by_x_degree().unwrap();
        for (k, delta) in enumerate_x_degrees(&shape, bound).iter().enumerate() {
            let a = down.x_coeff(delta).ok_or(format!("{s} {delta:?} missing after descent"))?;
            let b = x.x_coeff(delta).ok_or(format!("{s} {delta:?} missing"))?;
            let hint = degree_hint(a, b);
            worst = worst.max(hint);
            ensure(
                qsum_equal(a, b, hint, TRIALS, SEED + k as u64).map_err(|e| e.to_string())?,
                format!("{s} {delta:?}"),
            )?;
            if shape.ambient() == 2 {
                ensure(
                    exact_equal(a, b, EXPANSION_LIMIT).map_err(|e| e.to_string())? == Some(true),
                    format!("{s} {delta:?} expansion"),
                )?;
            }
            checked += 1;
        }
    }
    sampling_ok(worst)?;
    Ok(format!("{checked} X-degrees, {TRIALS} trials each, full expansion on 1:2"))
}

fn recursion_x() -> Outcome {
    let mut entries = 0;
    for (s, ms, bound) in [("1:2", 1..=3, 3), ("1,2:3", 1..=2, 2), ("2:4", 1..=2, 2)] {
        let shape = sh(s);
        let series = build(&shape, SeriesVariant::XSmall, bound).unwrap();
        for m in ms {
            for (k, o) in all_x_orbits(&shape, m).iter().enumerate() {
                let r = verify_recursion(&series, o, bound, SEED + k as u64).map_err(|e| e.to_string())?;
                ensure(r.pass, format!("{s} m={m} {} -> {}", o.a, o.b))?;
                ensure(r.entries.iter().all(|e| e.pole_order <= 1), "pole order above 1")?;
                entries += r.entries.len();
            }
        }
    }
    Ok(format!("{entries} residue equalities, exact"))
}

fn recursion_y() -> Outcome {
    let shape = sh("1,2:3");
    let series = build(&shape, SeriesVariant::TwY, 2).unwrap();
    let (mut entries, mut poles) = (0, 0);
    for m in 1..=2 {
        for (k, o) in nondegenerate_y_orbits(&shape, m).iter().enumerate() {
            let r = verify_recursion(&series, o, 2, SEED + k as u64).map_err(|e| e.to_string())?;
            ensure(r.pass, format!("m={m} {} -> {}", o.a, o.b))?;
            entries += r.entries.len();
            poles += r.entries.iter().filter(|e| e.pole_order == 1).count();
        }
    }
    ensure(poles > 0, "no simple pole was exercised")?;
    Ok(format!("{entries} residue equalities ({poles} simple poles), exact"))
}

fn vanishing() -> Outcome {
    let mut notes = Vec::new();
    for (s, m, bound) in [("1,2:3", 1, 2), ("1,2:3", 2, 2), ("1,2,3:4", 1, 1)] {
        let r = check_vanishing(&sh(s), m, bound, SEED).map_err(|e| e.to_string())?;
        ensure(r.pass, format!("{s} m={m} bound={bound}"))?;
        let s1 = r.reduction.iter().filter(|e| e.y_terms > 0).count();
        ensure(s1 > 0, format!("{s} m={m}: reduction vacuous"))?;
        notes.push(format!("{s} m={m}: {} y=1 sums, {s1} reduction degrees", r.vanishing.len()));
    }
    Ok(notes.join("; "))
}

fn gamma() -> Outcome {
    let mut n = 0;
    for (i, r, s) in [(1, 1, 2), (1, 2, 1), (2, 1, 3)] {
        for m in 1..=3u32 {
            for delta in -3..=3 {
                for k in -3..=3 {
                    let seed = SEED + n as u64;
                    let (exact, sampled) =
                        gamma_edge_identity(i, r, s, m, delta, k, seed).map_err(|e| e.to_string())?;
                    ensure(exact && sampled, format!("({i},{r},{s}) m={m} D={delta} k={k}"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} instances, full expansion"))
}

fn degree_gap() -> Outcome {
    let mut n = 0;
    for shape in all_shapes(4) {
        let r = small_j_property(&shape, 4);
        ensure(r.holds, format!("{shape}: S < 1"))?;
        ensure(r.oracle_agrees, format!("{shape}: factor count disagrees"))?;
        n += r.entries.len();
    }
    Ok(format!("{n} degrees on {} shapes", all_shapes(4).len()))
}

fn pairing() -> Outcome {
    let shapes = all_shapes(4);
    for shape in &shapes {
        let q = PairingQuery { shape: shape.clone(), f: QSum::one(), g: QSum::one() };
        let v = pairing_value(&q, SEED).map_err(|e| e.to_string())?;
        ensure(v == int(1), format!("{shape}: <O,O> = {v}"))?;
    }
    let mut cross = 0;
    for s in ["1:2", "1:3", "1:4"] {
        let shape = sh(s);
        for e in -3..=3 {
            let f = QSum::from(FactoredTerm::monomial(int(1), Monomial::var_pow(VarId::p(1, 1), e)));
            let q = PairingQuery { shape: shape.clone(), f: f.clone(), g: QSum::one() };
            let a = pairing_value(&q, SEED).map_err(|e| e.to_string())?;
            let b = p1_residue_pairing(&shape, &f, SEED).map_err(|e| e.to_string())?;
            ensure(a == b, format!("{s} P^{e}: {a} vs {b}"))?;
            cross += 1;
        }
    }
    Ok(format!("{} shapes; {cross} residue cross-checks, exact", shapes.len()))
}

fn weyl() -> Outcome {
    let mut n = 0;
    for s in ["1,2:3", "2:4"] {
        let shape = sh(s);
        let mut runs = vec![descend(&build(&shape, SeriesVariant::TwY, 2).unwrap()).map_err(|e| e.to_string())?];
        let mut variants = vec![SeriesVariant::Cotangent];
        for i in 1..=shape.n() {
            variants.extend([SeriesVariant::EuDualTaut { i }, SeriesVariant::EuTaut { i }]);
            variants.extend([-1, 1, 2].map(|l| SeriesVariant::Level { i, l }));
        }
        for v in variants {
            runs.push(build(&shape, v, 2).map_err(|e| e.to_string())?);
        }
        for series in runs {
            let r = weyl_check(&series, 2, TRIALS, SEED).map_err(|e| e.to_string())?;
            ensure(r.pass, format!("{s} {}", series.variant))?;
            n += r.entries.len();
        }
    }
    Ok(format!("{n} transposition tests, {TRIALS} trials each"))
}

fn balance() -> Outcome {
    let entries = cotangent_balance(&sh("1,2:3"), 3);
    for e in &entries {
        ensure(
            e.numerator == e.denominator,
            format!("{} {}: {} vs {}", e.degree, e.ratio, e.numerator, e.denominator),
        )?;
    }
    ensure(entries.iter().any(|e| e.numerator > 0), "no factor counted")?;
    Ok(format!("{} (degree, ratio) counts", entries.len()))
}

fn level() -> Outcome {
    for s in ["1:2", "1,2:3", "2:4"] {
        let shape = sh(s);
        for i in 1..=shape.n() {
            for l in [-1, 1, 2] {
                ensure(
                    level_matches_x_small(&shape, i, l, 3).map_err(|e| e.to_string())?,
                    format!("{s} LEVEL({i},{l})"),
                )?;
            }
        }
    }
    let mut ratios = 0;
    for s in ["1:2", "1:3"] {
        for l in [0, 1] {
            let r = level_duality_report(&sh(s), 1, l, 2, SEED).map_err(|e| e.to_string())?;
            ensure(r.pass, format!("{s} l={l}: ratio not monomial"))?;
            for e in &r.entries {
                let m = e.ratio.as_ref().ok_or(format!("{s} l={l} {}: no ratio", e.point))?;
                ensure(l != 0 || m.is_one(), format!("{s} l=0 {}: ratio {}", e.point, m.monomial))?;
                ratios += 1;
            }
        }
    }
    Ok(format!("monomial multiples to degree 3; {ratios} duality ratios"))
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qkflag");
    let runs: &[&[&str]] = &[
        &["verify", "recursion", "--shape", "1:2", "--m", "2", "--bound", "3"],
        &["verify", "recursion", "--shape", "1,2:3", "--variant", "tw-y", "--bound", "1"],
        &["verify", "vanishing", "--shape", "1,2:3", "--m", "1", "--bound", "2"],
        &["verify", "weyl", "--shape", "1,2:3", "--bound", "2"],
        &["verify", "degree-gap", "--shape", "2:4", "--bound", "3"],
        &["verify", "pairing", "--shape", "1:3"],
        &["verify", "level-duality", "--shape", "1:3", "--bound", "2"],
        &["verify", "descent", "--shape", "1,2:3", "--bound", "2"],
    ];
    let dir = std::env::temp_dir().join(format!("qkflag-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    for (k, args) in runs.iter().enumerate() {
        let mut outs = Vec::new();
        for rep in 0..2 {
            let path = dir.join(format!("{k}-{rep}.json"));
            let status = Command::new(bin)
                .args(*args)
                .args(["--seed", "11", "--output"])
                .arg(&path)
                .stdout(Stdio::null())
                .status()
                .map_err(|e| e.to_string())?;
            ensure(status.code() == Some(0), format!("{} exited with {status}", args.join(" ")))?;
            outs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
        }
        ensure(outs[0] == outs[1], format!("{}: reports differ", args.join(" ")))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} commands, byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("descent identity", descent),
        ("isolated recursion on X", recursion_x),
        ("twisted recursion on Y", recursion_y),
        ("non-isolated vanishing", vanishing),
        ("edge identity for the twist factors", gamma),
        ("degree gap", degree_gap),
        ("pairing", pairing),
        ("Weyl invariance", weyl),
        ("cotangent balance", balance),
        ("level structures", level),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {:>2} {name}: {msg} ({secs:.1}s)", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg} ({secs:.1}s)", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
