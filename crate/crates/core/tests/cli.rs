mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::*;

fn ktc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ktc"))
        .args(args)
        .env("KTC_NO_COLOR", "1")
        .output()
        .unwrap()
}

fn fixture(name: &str) -> String {
    fixture_dir().join(format!("{name}.json")).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn version() {
    let o = ktc(&["--version"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("ktc "));
}

#[test]
fn palette_export() {
    let o = ktc(&["palette", "--export", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "\\definecolor{ktred-bg}{HTML}{FFEBEE}"));
    assert!(out.lines().any(|l| l == "\\definecolor{ktblue-bg-dark}{HTML}{1F2A36}"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("palette.json");
    let o = ktc(&["palette", "--export", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["red"]["light"]["bg"], "FFEBEE");
}

#[test]
fn orcid_command() {
    let o = ktc(&["orcid", "0000000281263528"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0000-0002-8126-3528");
    let o = ktc(&["orcid", "0000-0002-8126-3527"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).starts_with("error bad-orcid"), "{}", stderr(&o));
}

#[test]
fn check_reports_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"items":[{"box":{"kind":"numbered","theme":"red","body":["x"],"extra":1}}]}"#).unwrap();
    let o = ktc(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("warn unknown-field items[0].box.extra:"), "{err}");
    assert!(err.contains("error numbered-without-title items[0].box.title: numbered box requires title"), "{err}");
    assert!(!err.contains('\x1b'));

    fs::write(&bad, "{\"items\": [\n  {\"box\": }\n]}").unwrap();
    let o = ktc(&["check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(line 2)"), "{}", stderr(&o));

    let o = ktc(&["check", &fixture("framework_tree")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stderr(&o), "");
}

#[test]
fn missing_input_is_io_error() {
    let o = ktc(&["check", "/nonexistent/doc.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compile_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("build");
    let o = ktc(&["compile", &fixture("framework_tree"), "--target", "both", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("manifest.json")).unwrap()).unwrap();
    let paths: Vec<&str> = manifest.as_array().unwrap().iter().map(|e| e["path"].as_str().unwrap()).collect();
    assert_eq!(paths, ["preamble.tex", "body-00-tree.tex", "tree-00.svg"]);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn compile_modes_and_linking() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("dark");
    let o = ktc(&[
        "compile",
        &fixture("wide_box"),
        "--target",
        "latex",
        "--out",
        out.to_str().unwrap(),
        "--mode",
        "dark",
        "--link-packages",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let body = fs::read_to_string(out.join("body-00-box.tex")).unwrap();
    assert!(body.starts_with("\\begin{ktboxwide}[theme=orange-dark]"));
    let pre = fs::read_to_string(out.join("preamble.tex")).unwrap();
    assert!(pre.contains("\\usepackage{ktcolor,ktbox,ktlrtree,ktorcid}"));
}

#[test]
fn failed_compile_leaves_out_dir_alone() {
    let dir = tempfile::tempdir().unwrap();
    let doc = dir.path().join("dark-cyan.json");
    fs::write(&doc, r#"{"mode":"dark","items":[{"box":{"kind":"standard","theme":"cyan","body":["x"]}}]}"#).unwrap();
    let out = dir.path().join("out");
    let o = ktc(&["compile", doc.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("role-unavailable"));
    assert!(!Path::new(&out).exists());
}

#[test]
fn tree_command() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("framework_tree.svg");
    let o = ktc(&["tree", &fixture("framework_tree"), "--index", "0", "--out", svg.to_str().unwrap(), "--em-px", "16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.contains(r#"width="144""#), "s-size root at 16px/em is 120 wide, m-size children 144");
    let o = ktc(&["tree", &fixture("basic_box"), "--index", "0", "--out", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = ktc(&["tree", &fixture("framework_tree"), "--index", "3", "--out", svg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = ktc(&["tree", &fixture("framework_tree"), "--index", "0", "--out", svg.to_str().unwrap(), "--v-gap", "0"]);
    assert_eq!(o.status.code(), Some(1));
}
