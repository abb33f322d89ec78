use std::path::Path;
use std::process::{Command, Output};

use swrbd::Certificate;
use swrbd_core::presets::preset_document;
use swrbd_core::{load_preset, run_pipeline};

fn swrbd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_swrbd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn run_park_q_certificate() {
    let o = swrbd(&["run", "--preset", "park-q"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert = Certificate::from_json(&stdout(&o)).unwrap();
    assert_eq!(cert.stage_counts, [437_400, 17_496, 3_754, 2]);
    assert_eq!(cert.minimal, Some(true));
    assert!(cert.lemma_verified);
    assert_eq!(cert.blown_down_squares, ["1", "1"]);
    assert_eq!(cert.formal_dimensions, ["0", "0"]);
    assert!(cert.assumptions.iter().any(|a| a.contains("H' = PD(A+B)")));
    assert!(stderr(&o).contains("candidates in"));
}

#[test]
fn run_park_p_certificate_matches_library() {
    let o = swrbd(&["run", "--preset", "park-p"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cert = Certificate::from_json(&stdout(&o)).unwrap();
    let report = run_pipeline(&load_preset("park-p").unwrap());
    assert_eq!(cert.stage_counts, report.counts.as_array());
    assert_eq!(cert.stage_counts[0], 612_360);
    assert_eq!(cert.stage_counts[1], 12_498);
    assert_eq!(cert.stage_counts[3], 2);
    assert_eq!(cert.minimal, Some(true));
    assert_eq!(cert.ambient_squares, [-4, -4]);
    assert_eq!(cert.blown_down_squares, ["2", "2"]);
    assert_eq!(cert.h_pairings, [49, -49]);
    assert_eq!(cert.h_prime_pairings, [-4, 4]);
    assert_eq!(cert.sw_values, ["±1", "±1"]);
}

#[test]
fn thread_count_does_not_change_certificate() {
    let base = swrbd(&["run", "--preset", "park-q", "--threads", "1"]);
    assert_eq!(code(&base), 0);
    for n in ["2", "3", "8"] {
        let o = swrbd(&["run", "--preset", "park-q", "--threads", n]);
        assert_eq!(code(&o), 0);
        assert_eq!(o.stdout, base.stdout, "--threads {n}");
    }
    let default = swrbd(&["run", "--preset", "park-q"]);
    assert_eq!(default.stdout, base.stdout);
}

#[test]
fn report_round_trips_stored_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("p.json");
    let cert_path = cert.to_str().unwrap();
    let o = swrbd(&["run", "--preset", "park-p", "--out", cert_path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let stored = std::fs::read(&cert).unwrap();
    assert_eq!(stored.last(), Some(&b'\n'));

    let json = swrbd(&["report", "--in", cert_path, "--format", "json"]);
    assert_eq!(code(&json), 0);
    assert_eq!(json.stdout, stored);

    let text = swrbd(&["report", "--in", cert_path, "--format", "text"]);
    assert_eq!(code(&text), 0);
    let text = stdout(&text);
    assert!(text.contains("minimal: true"));
    assert_eq!(
        text.lines().last().unwrap(),
        "basic classes: ±(-2,-2,1,1,1,1,1,1,1,1,1,1,1,1)"
    );

    let direct = swrbd(&["run", "--preset", "park-p", "--format", "text"]);
    assert_eq!(stdout(&direct), text);
}

#[test]
fn report_failures_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let o = swrbd(&[
        "report",
        "--in",
        missing.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("cannot read"));

    let junk = write_json(dir.path(), "junk.json", &serde_json::json!({"label": "x"}));
    let o = swrbd(&["report", "--in", &junk, "--format", "text"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("is not a certificate"));
}

#[test]
fn non_symmetric_gram_fails_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = preset_document("park-q").unwrap();
    doc.gram[0][5] = 1;
    let path = write_json(dir.path(), "bad.json", &doc);
    let o = swrbd(&["run", "--config", &path]);
    assert_eq!(code(&o), 1);
    assert!(o.stdout.is_empty());
    assert!(
        stderr(&o).contains("gram matrix is not symmetric"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn config_file_runs_like_preset() {
    let dir = tempfile::tempdir().unwrap();
    let doc = preset_document("park-q").unwrap();
    let path = write_json(dir.path(), "q.json", &doc);
    let from_file = swrbd(&["run", "--config", &path]);
    let from_preset = swrbd(&["run", "--preset", "park-q"]);
    assert_eq!(code(&from_file), 0);
    let a = Certificate::from_json(&stdout(&from_file)).unwrap();
    let b = Certificate::from_json(&stdout(&from_preset)).unwrap();
    assert_eq!(a.config_digest, b.config_digest);
    assert_eq!(a.stage_counts, b.stage_counts);
}

#[test]
fn verify_presets_pass() {
    for label in ["park-p", "park-q"] {
        let o = swrbd(&["verify", "--preset", label]);
        assert_eq!(code(&o), 0, "{}", stdout(&o));
        let out = stdout(&o);
        assert_eq!(out.lines().filter(|l| l.starts_with("PASS ")).count(), 13);
        assert!(out.contains("extension tuples"));
    }
}

#[test]
fn verify_rejects_tampered_h() {
    let dir = tempfile::tempdir().unwrap();
    let mut doc = preset_document("park-p").unwrap();
    // H + R1 pairs with R1 to R1² = -2.
    for (h, r) in doc.h.iter_mut().zip(&doc.chain.classes[1]) {
        *h += r;
    }
    let path = write_json(dir.path(), "tampered.json", &doc);
    let o = swrbd(&["verify", "--config", &path]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(
        out.lines()
            .any(|l| l.starts_with("FAIL H orthogonal to chain") && l.contains("R1")),
        "{out}"
    );
    assert!(stderr(&o).contains("1 check(s) failed"));
}

#[test]
fn unknown_preset_is_a_domain_error() {
    let o = swrbd(&["run", "--preset", "park-x"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("unknown preset"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["run"][..],
        &["run", "--preset", "park-p", "--config", "x.json"],
        &["run", "--preset", "park-p", "--threads", "0"],
        &["run", "--preset", "park-p", "--format", "xml"],
        &["report", "--in", "x.json"],
        &["frobnicate"],
    ] {
        let o = swrbd(args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
}

#[test]
fn list_presets_names_both() {
    let o = swrbd(&["list-presets"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.starts_with("park-p\t"));
    assert!(out.contains("\npark-q\t"));
}
