//! End-to-end tests of the command-line binary: exit codes, transcript
//! determinism, and file round-trips through real processes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use caplab::corpus::{m3, y3};
use caplab::io::save_space;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_caplab")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf8 stderr")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

/// Temp dir pre-seeded with the two reference space files.
fn fixture_dir() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().expect("tempdir");
    save_space(&y3(), dir.path().join("Y3.cap")).expect("write Y3");
    save_space(&m3(), dir.path().join("M3.cap")).expect("write M3");
    let path = dir.path().to_path_buf();
    (dir, path)
}

#[test]
fn validate_distinguishes_good_and_malformed_files() {
    let (_guard, dir) = fixture_dir();
    let ok = run_in(&dir, &["validate", "--space", "Y3.cap"]);
    assert_eq!(exit_code(&ok), 0, "{}", stderr(&ok));
    assert!(stdout(&ok).contains("valid=true"));

    std::fs::write(dir.join("bad.cap"), "space B\npoints a b\nlambda a a 1\n").unwrap();
    let bad = run_in(&dir, &["validate", "--space", "bad.cap"]);
    assert_eq!(exit_code(&bad), 2);
    assert!(
        stderr(&bad).contains("bad.cap:3:"),
        "parse errors carry file and line: {}",
        stderr(&bad)
    );
}

#[test]
fn check_exits_by_verdict() {
    let (_guard, dir) = fixture_dir();
    let holds = run_in(&dir, &["check", "regular", "--space", "M3.cap", "--oplus", "plus"]);
    assert_eq!(exit_code(&holds), 0);
    assert!(stdout(&holds).contains("regular (plus): yes"));

    let fails = run_in(&dir, &["check", "regular", "--space", "Y3.cap", "--oplus", "plus"]);
    assert_eq!(exit_code(&fails), 1);
    let text = stdout(&fails);
    assert!(text.contains("regular (plus): no"), "{text}");
    assert!(text.contains("witness:"), "{text}");

    let usage = run_in(&dir, &["check", "strict", "--space", "M3.cap"]);
    assert_eq!(exit_code(&usage), 2, "strict without --subset is a usage error");

    let strict = run_in(
        &dir,
        &[
            "check", "strict", "--space", "M3.cap", "--subset", "{p,q}", "--alpha", "1",
            "--uniform",
        ],
    );
    assert_eq!(exit_code(&strict), 0, "{}", stderr(&strict));
    assert!(stdout(&strict).contains("uniformly strict (plus): yes"));
}

#[test]
fn classify_prints_the_held_properties() {
    let (_guard, dir) = fixture_dir();
    let output = run_in(&dir, &["classify", "--space", "Y3.cap"]);
    assert_eq!(exit_code(&output), 0);
    assert!(stdout(&output).contains("non-archimedean"), "{}", stdout(&output));
}

#[test]
fn verify_transcripts_are_byte_identical_for_identical_configs() {
    let (_guard, dir) = fixture_dir();
    let args = [
        "verify",
        "fast-paths",
        "--seed",
        "5",
        "--trials",
        "2",
        "--format",
        "kv",
    ];
    let first = run_in(&dir, &args);
    let second = run_in(&dir, &args);
    assert_eq!(exit_code(&first), 0, "{}", stdout(&first));
    assert_eq!(stdout(&first), stdout(&second));
    assert!(stdout(&first).contains("result=pass"));

    let reseeded = run_in(
        &dir,
        &["verify", "equivalence", "--seed", "6", "--trials", "5", "--format", "kv"],
    );
    let baseline = run_in(
        &dir,
        &["verify", "equivalence", "--seed", "5", "--trials", "5", "--format", "kv"],
    );
    assert_ne!(stdout(&reseeded), stdout(&baseline), "seed must steer the corpus");
}

#[test]
fn verify_rejects_unknown_suites_and_flags() {
    let (_guard, dir) = fixture_dir();
    let unknown = run_in(&dir, &["verify", "bogus"]);
    assert_eq!(exit_code(&unknown), 2);
    let flag = run_in(&dir, &["verify", "thm1", "--frobnicate"]);
    assert_eq!(exit_code(&flag), 2);
}

#[test]
fn construct_writes_a_package_that_recomputes_the_gap() {
    let (_guard, dir) = fixture_dir();
    let built = run_in(
        &dir,
        &["construct", "thm1", "--space", "Y3.cap", "--oplus", "plus", "--out", "pkg"],
    );
    assert_eq!(exit_code(&built), 0, "{}", stderr(&built));
    assert!(stdout(&built).contains("strict gap: 5 > 1"));
    for file in ["X_hom.cap", "Y3.cap", "f.map", "filter.fns", "transcript.txt"] {
        assert!(dir.join("pkg").join(file).exists(), "missing pkg/{file}");
    }

    // The gap is reproducible from the files alone: the hom-limit at f is 1
    // while the contraction default of f is 5.
    let limit = run_in(
        &dir,
        &[
            "hom-limit",
            "--x",
            "pkg/X_hom.cap",
            "--y",
            "pkg/Y3.cap",
            "--filter-file",
            "pkg/filter.fns",
            "--at",
            "pkg/f.map",
        ],
    );
    assert_eq!(exit_code(&limit), 0, "{}", stderr(&limit));
    assert_eq!(stdout(&limit), "hom-limit = 1\n");

    let default = run_in(&dir, &["default", "--map", "pkg/f.map", "--oplus", "plus"]);
    assert_eq!(exit_code(&default), 0, "{}", stderr(&default));
    assert_eq!(stdout(&default), "default (plus) = 5\ncontraction: no\n");

    let ext = run_in(
        &dir,
        &[
            "construct", "extension", "--space", "Y3.cap", "--oplus", "plus", "--out", "ext",
        ],
    );
    assert_eq!(exit_code(&ext), 0, "{}", stderr(&ext));
    assert!(stdout(&ext).contains("strict gap: 2 < 5"));
    assert!(dir.join("ext").join("g.map").exists());

    // Constructing from a regular target finds nothing and says so.
    let none = run_in(
        &dir,
        &["construct", "thm1", "--space", "M3.cap", "--oplus", "plus"],
    );
    assert_eq!(exit_code(&none), 1);
    assert!(stdout(&none).contains("nothing to construct"));
}

#[test]
fn extend_lists_the_domain_and_candidates() {
    let (_guard, dir) = fixture_dir();
    std::fs::write(
        dir.join("X4.cap"),
        "space X4\npoints s1 s2 t\nlambda t s1 0\n",
    )
    .unwrap();
    std::fs::write(
        dir.join("f.map"),
        "map f\nfrom X4 restrict s1 s2\nto Y3\npair s1 a\npair s2 b\n",
    )
    .unwrap();
    let output = run_in(
        &dir,
        &[
            "extend", "--x", "X4.cap", "--subset", "{s1,s2}", "--map", "f.map", "--alpha", "0",
            "--oplus", "plus",
        ],
    );
    assert_eq!(exit_code(&output), 0, "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("domain = {s1,s2,t}"), "{text}");
    assert!(text.contains("candidates = 1"), "{text}");
    assert!(text.contains("g: s1->a s2->b t->a m=0 admissible"), "{text}");
}

#[test]
fn refute_exits_one_exactly_when_a_witness_exists() {
    let (_guard, dir) = fixture_dir();
    let refuted = run_in(&dir, &["refute", "--space", "Y3.cap", "--oplus", "plus"]);
    assert_eq!(exit_code(&refuted), 1);
    let text = stdout(&refuted);
    assert!(text.contains("selection violation"), "{text}");
    assert!(text.contains("strict gap: 5 > 1"), "{text}");
    assert!(text.contains("strict gap: 2 < 5"), "{text}");

    let regular = run_in(&dir, &["refute", "--space", "M3.cap", "--oplus", "plus"]);
    assert_eq!(exit_code(&regular), 0);
    assert!(stdout(&regular).contains("no violation to refute"));
}
