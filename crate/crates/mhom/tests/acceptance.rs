//! One PASS/FAIL line per acceptance criterion, written straight to stderr so
//! the lines show up without `--nocapture`. The test fails if any criterion fails.
use mhom::compare::{self, CompareConfig};
use mhom::golden::{resolve_cover, resolve_space};
use mhom::homology::{self, Theory};
use mhom::report::{Report, SuiteReport};
use mhom::suites::{self, VerifyConfig};
use std::io::Write;
use std::time::{Duration, Instant};

const SEED: u64 = 20;

struct Criterion {
    name: &'static str,
    passed: bool,
    elapsed: Duration,
    note: String,
}

fn verify(name: &str) -> Report {
    let cfg = VerifyConfig { seed: SEED, budget: None, depth: 3, space: None, cover: None };
    suites::run(name, &cfg).expect("suite runs")
}

fn suite<'a>(report: &'a Report, name: &str) -> &'a SuiteReport {
    report.suites.iter().find(|s| s.suite == name).expect("suite present")
}

/// Every listed check ran at least `min` times and nothing failed.
fn enough(s: &SuiteReport, checks: &[(&str, usize)]) -> (bool, String) {
    let short: Vec<String> = checks
        .iter()
        .filter(|(c, min)| s.count(c) < *min)
        .map(|(c, min)| format!("{c}: {} < {min}", s.count(c)))
        .collect();
    let ok = s.passed() && short.is_empty();
    let mut note = format!("{} checks, {} failures", s.checks, s.failures.len());
    if !short.is_empty() {
        note += &format!("; too few: {}", short.join(", "));
    }
    (ok, note)
}

fn timed(name: &'static str, limit: Option<Duration>, f: impl FnOnce() -> (bool, String)) -> Criterion {
    let start = Instant::now();
    let (ok, mut note) = f();
    let elapsed = start.elapsed();
    let in_time = limit.is_none_or(|l| elapsed < l);
    if !in_time {
        note += &format!("; over the {:?} limit", limit.unwrap());
    }
    Criterion { name, passed: ok && in_time, elapsed, note }
}

fn golden() -> (bool, String) {
    let report = verify("golden");
    let (mut ok, mut note) = enough(suite(&report, "golden"), &[("groups", 8), ("lipschitz-identical", 8)]);
    // the command line output of the two theories is identical too
    for (space, pair) in [("s1", None), ("torus", None), ("klein", None), ("disc", Some("boundary"))] {
        let space = resolve_space(space).unwrap();
        let text = |t| homology::run(&space, pair, t).map(|r| r.result["groups"].clone()).ok();
        if text(Theory::Singular).is_none() || text(Theory::Singular) != text(Theory::Lipschitz) {
            ok = false;
            note += &format!("; theories differ on {}", space.name);
        }
    }
    (ok, note)
}

fn comparison(space: &str) -> (bool, String) {
    let space = resolve_space(space).unwrap();
    let cover = resolve_cover(None, &space).unwrap();
    let cfg = CompareConfig { degree: Some(1), depth: 3, seed: SEED, samples: 10 };
    let report = match compare::run(&space, None, Some(&cover), &cfg) {
        Ok(r) => r,
        Err(e) => return (false, e.to_string()),
    };
    let checks = [
        ("iota", vec![("cycle", 1)]),
        ("bracket-generators", vec![("unimodular", 1), ("pairing-nonsingular", 1)]),
        ("fill", vec![("boundary", 10), ("pairing-preserved", 10)]),
        ("cancel", vec![("boundary", 10)]),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, wanted) in checks {
        let (good, note) = enough(suite(&report, name), &wanted);
        ok &= good;
        notes.push(format!("{name} {note}"));
    }
    (ok, notes.join("; "))
}

#[test]
fn acceptance() {
    let criteria = vec![
        timed("golden homology", Some(Duration::from_secs(5)), golden),
        timed("chain map and Stokes", None, || {
            enough(suite(&verify("stokes"), "stokes"), &[("chain-map", 200), ("bb", 200), ("dd", 200)])
        }),
        timed("Green pairing", None, || {
            enough(suite(&verify("green"), "green"), &[("unit-square", 1), ("locality", 1)])
        }),
        timed("prism and cone", None, || {
            let (a, na) = enough(suite(&verify("prism"), "prism"), &[("product-boundary", 50)]);
            let (b, nb) = enough(suite(&verify("cone"), "cone"), &[("boundary", 50), ("diameter", 50)]);
            (a && b, format!("prism {na}; cone {nb}"))
        }),
        timed("mass estimates", None, || {
            enough(suite(&verify("mass"), "mass"), &[("pushforward", 100), ("subadditive", 100), ("equicontinuity", 100)])
        }),
        timed("cosheaf", None, || {
            let mut wanted = vec![("phi-phi", 1), ("squares-commute", 1)];
            let names: Vec<String> = ["arcs2", "arcs3"]
                .iter()
                .flat_map(|c| {
                    ["chain", "current"].into_iter().flat_map(move |t| {
                        ["eps-surjective", "kernel-eps", "kernel-phi"].into_iter().map(move |k| format!("{c}-{t}-{k}"))
                    })
                })
                .collect();
            wanted.extend(names.iter().map(|n| (n.as_str(), 50)));
            enough(suite(&verify("cosheaf"), "cosheaf"), &wanted)
        }),
        timed("comparison on S1", Some(Duration::from_secs(60)), || comparison("s1")),
        timed("comparison on torus", Some(Duration::from_secs(60)), || comparison("torus")),
        timed("degree-0 isomorphism", None, || {
            enough(suite(&verify("degree0"), "degree0"), &[("chain-round-trip", 100), ("current-round-trip", 100)])
        }),
        timed("McShane extension", None, || {
            enough(suite(&verify("mcshane"), "mcshane"), &[("lipschitz", 50), ("boundary-data", 50)])
        }),
    ];
    let mut lines = String::new();
    for c in &criteria {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        lines += &format!("{verdict} {} ({:.2}s): {}\n", c.name, c.elapsed.as_secs_f64(), c.note);
    }
    std::io::stderr().write_all(lines.as_bytes()).unwrap();
    let failed: Vec<&str> = criteria.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
