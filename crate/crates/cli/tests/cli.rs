//! End-to-end runs of the binary, checking outputs and the exit-code
//! contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const TOGGLE: &str = "vars { b: Bool; } init { !b } next { b' = !b } fair { }\n";
const SET: &str = "vars { pc: {a, c}; b: Bool; } init { pc = a & !b }\n\
    next { pc = c & pc' = a & b' = !b } fair { } hole assign a c;\n";

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehc-trans")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// A scratch directory private to one test.
fn scratch(test: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ehc-trans-cli-{}-{test}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn model_check_exit_codes() {
    let dir = scratch("mc");
    let prog = write(&dir, "toggle.prog", TOGGLE);
    let ok = bin(&["model-check", &prog, "A G (b | !b)"]);
    assert_eq!(code(&ok), 0);
    assert_eq!(stdout(&ok).trim(), "true");

    let bad = bin(&["model-check", &prog, "A G b", "--json"]);
    assert_eq!(code(&bad), 1);
    let v: serde_json::Value = serde_json::from_str(&stdout(&bad)).unwrap();
    assert_eq!(v["holds"], false);
    assert_eq!(v["states"], 2);

    let spec = write(&dir, "toggle.spec", "A G F b");
    assert_eq!(code(&bin(&["model-check", &prog, &spec])), 0);
}

#[test]
fn explicit_systems_are_accepted() {
    let dir = scratch("explicit");
    let sys = r#"{"vars": [{"name": "s", "sort": "Int"}], "states": [[0], [1]], "init": [0],
        "transitions": [[0, 1], [1, 1]], "fairness": []}"#;
    let sys = write(&dir, "sys.json", sys);
    assert_eq!(code(&bin(&["model-check", &sys, "A F G s = 1"])), 0);
    assert_eq!(code(&bin(&["model-check", &sys, "E G s = 0"])), 1);
}

#[test]
fn translate_enumerate_and_check_agree() {
    let dir = scratch("pipeline");
    let prog = write(&dir, "toggle.prog", TOGGLE);
    let text = dir.join("t.clauses");
    let json = dir.join("t.json");
    let out = bin(&["translate", &prog, "A G F b", "-o", text.to_str().unwrap(), "--json"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(report["clauses"], 6);
    assert_eq!(code(&bin(&["translate", &prog, "A G F b", "-o", json.to_str().unwrap(), "--format", "json"])), 0);

    let found = bin(&["enumerate", text.to_str().unwrap(), "--domain", "", "--json"]);
    assert_eq!(code(&found), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&found)).unwrap();
    assert_eq!(v["verdict"], "SAT");
    let model = write(&dir, "model.json", &v["model"].to_string());
    for clauses in [&text, &json] {
        let checked = bin(&["check-interp", clauses.to_str().unwrap(), &model]);
        assert_eq!(code(&checked), 0, "{}", String::from_utf8_lossy(&checked.stderr));
        assert_eq!(stdout(&checked).trim(), "model");
    }

    let capped = bin(&["enumerate", text.to_str().unwrap(), "--domain", "", "--cap", "1"]);
    assert_eq!(code(&capped), 3);
    assert!(stdout(&capped).starts_with("CAP_EXCEEDED"));
}

#[test]
fn false_properties_have_no_model() {
    let dir = scratch("unsat");
    let prog = write(&dir, "toggle.prog", TOGGLE);
    let clauses = dir.join("t.clauses");
    assert_eq!(code(&bin(&["translate", &prog, "A X !b", "-o", clauses.to_str().unwrap()])), 0);
    let out = bin(&["enumerate", clauses.to_str().unwrap(), "--domain", ""]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out).trim(), "UNSAT");
}

#[test]
fn a_broken_interpretation_is_reported() {
    let dir = scratch("broken");
    let prog = write(&dir, "toggle.prog", TOGGLE);
    let clauses = dir.join("t.clauses");
    assert_eq!(code(&bin(&["translate", &prog, "A G b", "-o", clauses.to_str().unwrap()])), 0);
    let interp = write(&dir, "empty.json", r#"{"relations": {}}"#);
    let out = bin(&["check-interp", clauses.to_str().unwrap(), &interp, "--json"]);
    // Missing relations are an input error, not a verdict.
    assert_eq!(code(&out), 2);
}

#[test]
fn translation_output_is_deterministic() {
    let dir = scratch("det");
    let prog = write(&dir, "toggle.prog", TOGGLE);
    let a = bin(&["translate", &prog, "E G F b & A G E X !b"]);
    let b = bin(&["translate", &prog, "E G F b & A G E X !b"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).lines().last().unwrap().starts_with("dwf "));
}

#[test]
fn synthesis_encode_and_apply() {
    let dir = scratch("synth");
    let pprog = write(&dir, "set.pprog", SET);
    let enc = bin(&["synth", "encode", &pprog, "A G (pc = a -> !b)"]);
    assert_eq!(code(&enc), 0);
    let text = stdout(&enc);
    assert!(text.starts_with("decl u_a_a/2"));
    let first_clause = text.lines().find(|l| l.starts_with("clause")).unwrap();
    assert!(first_clause.starts_with("clause [da:"), "{first_clause}");

    let psi = write(&dir, "psi.json", r#"{"holes": {"a": [[false, true], [true, false]]}}"#);
    let filled = bin(&["synth", "apply", &pprog, &psi]);
    assert_eq!(code(&filled), 0);
    let prog = write(&dir, "filled.prog", &stdout(&filled));
    assert_eq!(code(&bin(&["model-check", &prog, "A G (pc = a -> !b)"])), 0);

    let keep = write(&dir, "keep.json", r#"{"holes": {"a": [[false, false], [true, true]]}}"#);
    let prog = write(&dir, "kept.prog", &stdout(&bin(&["synth", "apply", &pprog, &keep])));
    assert_eq!(code(&bin(&["model-check", &prog, "A G (pc = a -> !b)"])), 1);

    let partial = write(&dir, "partial.json", r#"{"holes": {"a": [[false, true]]}}"#);
    assert_eq!(code(&bin(&["synth", "apply", &pprog, &partial])), 2);
}

#[test]
fn fixtures_list_and_run() {
    let list = bin(&["fixtures", "list", "--json"]);
    assert_eq!(code(&list), 0);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&stdout(&list)).unwrap();
    let names: Vec<&str> = rows.iter().map(|r| r["name"].as_str().unwrap()).collect();
    for n in ["robots", "bank", "micro-bank", "count-af", "set-impossible"] {
        assert!(names.contains(&n), "{n}");
    }
    assert_eq!(code(&bin(&["fixtures", "run", "count-af"])), 0);
    assert_eq!(code(&bin(&["fixtures", "run", "count-ag"])), 1);
    assert_eq!(code(&bin(&["fixtures", "run", "set-impossible"])), 1);
    assert_eq!(code(&bin(&["fixtures", "run", "set-invariant"])), 0);

    let bank = bin(&["fixtures", "run", "bank", "--json"]);
    assert_eq!(code(&bank), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&bank)).unwrap();
    assert_eq!(v["clauses"], 48);

    let shown = bin(&["fixtures", "show", "toggle-ax"]);
    assert!(stdout(&shown).contains("# spec: A X b"));
}

#[test]
fn input_errors_exit_with_two() {
    let dir = scratch("errors");
    let prog = write(&dir, "toggle.prog", TOGGLE);
    assert_eq!(code(&bin(&["no-such-command"])), 2);
    assert_eq!(code(&bin(&["model-check", "/nonexistent/file.prog", "A G b"])), 2);
    assert_eq!(code(&bin(&["model-check", &prog, "A G (b"])), 2);
    assert_eq!(code(&bin(&["model-check", &prog, "A G y"])), 2);
    assert_eq!(code(&bin(&["fixtures", "run", "no-such-fixture"])), 2);
    let garbled = write(&dir, "bad.clauses", "clause nonsense\n");
    assert_eq!(code(&bin(&["enumerate", &garbled, "--domain", ""])), 2);
}
