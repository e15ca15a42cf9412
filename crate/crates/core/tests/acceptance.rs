use std::time::{Duration, Instant};

use gpdcentre::cli::{parse_fibration, parse_shorthand, run_args};
use gpdcentre::error::Result;
use gpdcentre::fincat::FinGroupoid;
use gpdcentre::report::Report;
use gpdcentre::suites;

const SEED: u64 = 7;

fn groups(names: &[&str]) -> Vec<(String, FinGroupoid)> {
    names.iter().map(|n| (n.to_string(), parse_shorthand(n).unwrap())).collect()
}

/// Runs `body`, prints one line and asserts both the checks and the time limit.
fn criterion(n: usize, title: &str, limit: Duration, body: impl FnOnce() -> Result<Vec<(String, Report)>>) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed();
    let failure = match &outcome {
        Err(e) => Some(format!("error: {e}")),
        Ok(reports) => reports.iter().find_map(|(name, r)| {
            r.first_failure().map(|e| format!("{name}: {} {}", e.check_id, e.witness.clone().unwrap_or_default()))
        }),
    };
    let slow = elapsed > limit;
    let verdict = if failure.is_none() && !slow { "PASS" } else { "FAIL" };
    println!(
        "criterion {n:>2} {verdict} {title} ({:.2}s of {}s){}",
        elapsed.as_secs_f64(),
        limit.as_secs(),
        failure.as_deref().map(|f| format!(" {f}")).unwrap_or_default()
    );
    assert!(failure.is_none(), "criterion {n}: {}", failure.unwrap());
    assert!(!slow, "criterion {n}: {elapsed:?} exceeds {limit:?}");
}

#[test]
fn c01_aut_components_and_centralisers() {
    criterion(1, "automorphism groupoid structure", Duration::from_secs(1), || {
        groups(&["C1", "C2", "C4", "S3", "D4"])
            .into_iter()
            .map(|(n, g)| Ok((n, suites::aut_structure(&g)?)))
            .collect()
    });
}

#[test]
fn c02_balanced_star_autonomy() {
    criterion(2, "balanced star-autonomy", Duration::from_secs(30), || {
        groups(&["S3", "D4"]).into_iter().map(|(n, g)| Ok((n, suites::balanced_autonomy(&g)?))).collect()
    });
}

#[test]
fn c03_crossed_round_trip() {
    criterion(3, "crossed G-set round trip", Duration::from_secs(60), || {
        groups(&["C1", "C2", "C4", "S3", "D4"])
            .into_iter()
            .map(|(n, g)| Ok((n, suites::crossed_roundtrip(&g, SEED, 20, 5)?)))
            .collect()
    });
}

#[test]
fn c04_coend_engine() {
    criterion(4, "coend units and associator", Duration::from_secs(120), || {
        Ok(vec![("coend".into(), suites::coend_engine(SEED, 50, 10)?)])
    });
}

#[test]
fn c05_day_convolution_is_pointwise() {
    criterion(5, "Day convolution versus pointwise product", Duration::from_secs(60), || {
        groups(&["C2", "S3"]).into_iter().map(|(n, g)| Ok((n, suites::day_pointwise(&g, SEED, 20, 4)?))).collect()
    });
}

#[test]
fn c06_fibration_pipeline() {
    criterion(6, "fibration pipeline", Duration::from_secs(120), || {
        ["C4->C2:mod2", "S3->C2:sign"]
            .iter()
            .map(|s| Ok((s.to_string(), suites::fibration_pipeline(&parse_fibration(s)?)?)))
            .collect()
    });
}

#[test]
fn c07_biequivalence() {
    criterion(7, "biequivalence round trips", Duration::from_secs(120), || {
        ["C4->C2:mod2", "S3->C2:sign"]
            .iter()
            .map(|s| Ok((s.to_string(), suites::biequivalence(&parse_fibration(s)?, SEED, 10, 4)?)))
            .collect()
    });
}

#[test]
fn c08_biduals() {
    criterion(8, "bidual involution and comparison", Duration::from_secs(60), || {
        ["C4->C2:mod2", "S3->C2:sign"]
            .iter()
            .map(|s| Ok((s.to_string(), suites::biduals(&parse_fibration(s)?)?)))
            .collect()
    });
}

#[test]
fn c09_full_centre() {
    criterion(9, "full centre round trips", Duration::from_secs(120), || {
        ["C4->C2:mod2", "S3->C2:sign"]
            .iter()
            .map(|s| Ok((s.to_string(), suites::full_centre(&parse_fibration(s)?, SEED, 10)?)))
            .collect()
    });
}

#[test]
fn c10_cp_mod_cat() {
    criterion(10, "cpModCat correspondence", Duration::from_secs(60), || {
        Ok(vec![("cp_modcat".into(), suites::cp_modcat(SEED, 5)?)])
    });
}

#[test]
fn cli_examples() {
    let (code, out) = run_args(["gpdcentre", "aut", "--groupoid", "symmetric:3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("objects = 6") && out.contains("morphisms = 36") && out.contains("components = 3"), "{out}");

    let (code, out) = run_args(["gpdcentre", "check-fibration", "--fibration", "C2->C4:double"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("unliftable"), "{out}");

    let args = ["gpdcentre", "verify-all", "--fibration", "C4->C2:mod2", "--seed", "7", "--format", "json"];
    let (code, out) = run_args(args);
    assert_eq!(code, 0, "{out}");
    assert_eq!(run_args(args), (code, out));

    assert_eq!(run_args(["gpdcentre", "aut", "--groupoid", "cyclic:x"]).0, 2);
    assert_eq!(run_args(["gpdcentre", "bogus"]).0, 2);
}
