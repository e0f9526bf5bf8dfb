use std::path::{Path, PathBuf};
use std::process::Command;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn fixture(name: &str) -> PathBuf {
    fixtures().join(format!("{name}.json"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("cartan-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cartan")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn run_on(cmd: &str, path: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

/// Value of a top-level `key: value` line.
fn line<'a>(report: &'a str, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    report
        .lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
}

fn verdict(report: &str, key: &str) -> bool {
    line(report, key).starts_with("true")
}

fn names() -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(fixtures())
        .unwrap()
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "json").then(|| p.file_stem().unwrap().to_string_lossy().into_owned())
        })
        .collect();
    v.sort();
    v
}

const VERDICTS: [&str; 6] = ["ADP", "ACP", "AQP", "gr-ADP", "gr-ACP", "gr-AQP"];

#[test]
fn validate_exit_codes() {
    assert_eq!(run_on("validate", &fixture("m2_f2"), &[]).0, 0);
    let (code, out) = run_on("validate", &fixture("s3_dt3_fail"), &[]);
    assert_eq!(code, 2);
    assert_eq!(line(&out, "axiom"), "DT3 centrality");
    assert!(!line(&out, "witnesses").is_empty());
    let bad = scratch("malformed.json");
    std::fs::write(&bad, "{\"schema\": 1, \"ring\": ").unwrap();
    assert_eq!(run_on("validate", &bad, &[]).0, 1);
    std::fs::write(&bad, "{\"schema\": 1, \"ring\": {\"mod\": 5}, \"extra\": 0}").unwrap();
    assert_eq!(run_on("validate", &bad, &[]).0, 1);
    std::fs::write(&bad, "{\"schema\": 2, \"ring\": {\"mod\": 5}}").unwrap();
    assert_eq!(run_on("validate", &bad, &[]).0, 1);
    assert_eq!(run_on("validate", &scratch("missing.json"), &[]).0, 1);
}

#[test]
fn validate_with_oracle() {
    let (code, out) = run_on("validate", &fixture("z2_cocycle2_f5_explicit"), &["--oracle"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("literal DT2: true"));
}

#[test]
fn classify_examples() {
    let out = run_on("classify", &fixture("m2_f2"), &[]).1;
    assert!(verdict(&out, "gr-ADP"));
    let out = run_on("classify", &fixture("grouping_f5_z2_graded"), &[]).1;
    assert!(verdict(&out, "gr-AQP"));
    assert!(!verdict(&out, "AQP"));
    let (code, out) = run_on("classify", &fixture("grouping_f5_z2_trivial"), &["--oracle"]);
    assert_eq!(code, 0);
    assert!(!verdict(&out, "AQP"));
    assert!(line(&out, "AQP").contains("1 + 2*x"));
    assert!(out.contains("N⋆(C) against the scan: true"));
}

#[test]
fn tiny_cap_gives_undecided() {
    let (code, out) = run_on("classify", &fixture("m3_f3"), &["--cap", "10"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("undecided(cap)"), "{out}");
}

#[test]
fn reconstruct_emits_reingestible_twists() {
    for name in ["m2_f2", "grouping_f5_z2_graded", "z2_cocycle_f5", "r2_plus_z2"] {
        let emitted = scratch(&format!("{name}_star.json"));
        let (code, out) = run_on("reconstruct", &fixture(name), &["--emit", emitted.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        assert!(line(&out, "emitted").ends_with("_star.json"));
        assert_eq!(run_on("validate", &emitted, &[]).0, 0);
        let a = run_on("classify", &fixture(name), &[]).1;
        let b = run_on("classify", &emitted, &[]).1;
        for k in VERDICTS {
            assert_eq!(verdict(&a, k), verdict(&b, k), "{name}: {k}");
        }
        let (code, out) = run_on("roundtrip", &emitted, &[]);
        assert_eq!(code, 0);
        assert_eq!(line(&out, "result"), "twist recovered up to isomorphism");
    }
    let out = run_on("reconstruct", &fixture("grouping_f5_z2_graded"), &[]).1;
    assert_eq!(line(&out, "twist"), "trivial");
}

#[test]
fn reconstruct_refuses_non_pairs() {
    let (code, out) = run_on("reconstruct", &fixture("z6_wt_fail"), &[]);
    assert_eq!(code, 2);
    assert_eq!(line(&out, "status"), "refused");
    assert!(line(&out, "detail").contains("WT"));
}

#[test]
fn roundtrip_every_valid_twist() {
    for name in names() {
        let (code, out) = run_on("roundtrip", &fixture(&name), &[]);
        if name.ends_with("_fail") {
            assert_ne!(code, 0, "{name}");
            continue;
        }
        assert_eq!(code, 0, "{name}\n{out}");
        let all_true = line(&out, "agreement") == "consistent (all true)";
        let result = line(&out, "result");
        if all_true {
            assert_eq!(result, "twist recovered up to isomorphism", "{name}");
        } else {
            assert_eq!(line(&out, "agreement"), "consistent (all false)", "{name}");
            assert!(result.starts_with("Φ-surjectivity counterexample: ↑("), "{name}: {result}");
        }
    }
    let out = run_on("roundtrip", &fixture("grouping_f5_z2_trivial"), &[]).1;
    assert_eq!(line(&out, "result"), "Φ-surjectivity counterexample: ↑(1 + 2*x)");
}

#[test]
fn roundtrip_needs_a_twist() {
    assert_eq!(run_on("roundtrip", &fixture("z6_wt_fail"), &[]).0, 1);
}

#[test]
fn json_reports_parse() {
    for cmd in ["validate", "classify", "reconstruct", "roundtrip"] {
        let (_, out) = run_on(cmd, &fixture("m2_f3"), &["--json"]);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{cmd}: {e}"));
        assert_eq!(v["command"], cmd);
    }
}

#[test]
fn sequential_matches_parallel() {
    for name in ["m3_f2", "z3_coboundary_f7", "group_ring_f3_z3_trivial"] {
        for cmd in ["classify", "roundtrip"] {
            let a = run_on(cmd, &fixture(name), &["--oracle"]).1;
            let b = run_on(cmd, &fixture(name), &["--oracle", "--sequential"]).1;
            assert_eq!(a, b, "{cmd} {name}");
        }
    }
}

#[test]
fn convert_round_trips() {
    let src = fixture("z2_cocycle2_f5");
    let base = run_on("classify", &src, &[]).1;
    let explicit = scratch("explicit.json");
    let omega = scratch("omega.json");
    let algebra = scratch("algebra.json");
    assert_eq!(run_on("convert", &src, &["--to", "explicit", "-o", explicit.to_str().unwrap()]).0, 0);
    assert_eq!(run_on("convert", &explicit, &["--to", "omega", "-o", omega.to_str().unwrap()]).0, 0);
    assert_eq!(run_on("convert", &omega, &["--to", "algebra", "-o", algebra.to_str().unwrap()]).0, 0);
    for p in [&explicit, &omega, &algebra] {
        let out = run_on("classify", p, &[]).1;
        for k in VERDICTS {
            assert_eq!(verdict(&base, k), verdict(&out, k), "{}: {k}", p.display());
        }
    }
    let (code, doc) = run_on("convert", &src, &["--to", "omega"]);
    assert_eq!(code, 0);
    assert!(doc.contains("\"omega\""));
    assert_eq!(run_on("convert", &fixture("z6_wt_fail"), &["--to", "omega"]).0, 1);
}

#[test]
fn golden_reports() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for name in names() {
        for cmd in ["classify", "reconstruct", "roundtrip"] {
            let out = run_on(cmd, &fixture(&name), &[]).1;
            let path = fixtures().join("golden").join(cmd).join(format!("{name}.txt"));
            if update {
                std::fs::create_dir_all(path.parent().unwrap()).unwrap();
                std::fs::write(&path, &out).unwrap();
            } else {
                let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
                assert_eq!(out, want, "{cmd} {name}");
            }
        }
    }
}
