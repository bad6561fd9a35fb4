use std::path::PathBuf;
use std::process::{Command, Output};

use momentframe::framework::{make_desargues, make_named, parse_framework};
use momentframe::{Mode, Rational};
use momentframe_cli::ReportDocument;

fn shipped(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../frameworks")
        .join(format!("{name}.fw"))
}

fn momentframe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_momentframe"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_report(name: &str, extra: &[&str]) -> ReportDocument {
    let path = shipped(name);
    let mut args = vec!["analyze", path.to_str().unwrap(), "--json"];
    args.extend_from_slice(extra);
    let o = momentframe(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn shipped_files_match_generators() {
    let half = Rational::new(1.into(), 2.into());
    for name in ["bar", "triangle", "square", "box3d", "desargues"] {
        let text = std::fs::read_to_string(shipped(name)).unwrap();
        let expected = if name == "desargues" {
            make_desargues(&half).unwrap()
        } else {
            make_named(name, 0).unwrap()
        };
        assert_eq!(parse_framework(&text, Mode::Exact).unwrap(), expected, "{name}");
        assert_eq!(text, expected.to_text(), "{name}");
    }
}

#[test]
fn square_table() {
    let o = momentframe(&["analyze", shipped("square").to_str().unwrap(), "--dims-only"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("s; dim H1   |    0    3    4"), "{out}");
    assert!(out.contains("m; dim H0   |    4    3    0"), "{out}");
}

#[test]
fn desargues_json() {
    let doc = json_report("desargues", &[]);
    assert_eq!(doc.schema, 1);
    assert_eq!(doc.ranks.phi, 1);
    assert_eq!(doc.ranks.pi, 11);
    assert_eq!(doc.dims("F"), Some((1, 4)));
    assert!(doc.input_digest.starts_with("sha256:"));
    assert!(doc.chains.is_none());
}

#[test]
fn bar_dims() {
    let doc = json_report("bar", &[]);
    let h1: Vec<usize> = doc.homology.iter().map(|r| r.h1).collect();
    let h0: Vec<usize> = doc.homology.iter().map(|r| r.h0).collect();
    assert_eq!(h1, vec![0, 0, 0]);
    assert_eq!(h0, vec![3, 3, 0]);
}

#[test]
fn reports_are_byte_identical() {
    let path = shipped("desargues");
    let args = ["analyze", path.to_str().unwrap(), "--json", "--chains"];
    assert_eq!(momentframe(&args).stdout, momentframe(&args).stdout);
    let args = ["analyze", path.to_str().unwrap()];
    assert_eq!(momentframe(&args).stdout, momentframe(&args).stdout);
}

#[test]
fn chains_listing() {
    let doc = json_report("square", &["--chains"]);
    let chains = doc.chains.unwrap();
    assert_eq!(chains.anchored_h1.len(), 4);
    assert_eq!(chains.mechanisms.len(), 1);
    assert_eq!(chains.mechanisms[0].len(), 8);
}

#[test]
fn float_mode_report() {
    let doc = json_report("desargues", &["--mode", "float"]);
    assert_eq!(doc.mode, "float");
    assert_eq!((doc.ranks.phi, doc.ranks.pi, doc.ranks.connecting), (1, 11, 1));
    assert!(doc.all_pass);
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let path = shipped("triangle");
    let o = momentframe(&["analyze", path.to_str().unwrap(), "--json", "-o", target.to_str().unwrap()]);
    assert_eq!(std::fs::read(&target).unwrap(), o.stdout);
}

#[test]
fn invalid_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fw");
    std::fs::write(&bad, "dim 2\nv 0 0 0\nv 1 0 0\ne 0 1\n").unwrap();
    let o = momentframe(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("zero-length edge"), "{}", stderr(&o));
    let o = momentframe(&["analyze", dir.path().join("missing.fw").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let o = momentframe(&["generate", "pentagon"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn disconnected_input_warns() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("two.fw");
    std::fs::write(&path, "dim 2\nv 0 0 0\nv 1 1 0\nv 2 5 5\nv 3 6 5\ne 0 1\ne 2 3\n").unwrap();
    let o = momentframe(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("disconnected"));
    assert!(stdout(&o).contains("n/a"));
}

#[test]
fn scan_rows() {
    let o = momentframe(&["scan", shipped("desargues").to_str().unwrap(), "-m", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[1], "0,0,1,4,12,3,12,0,1,11,1,ok");

    let o = momentframe(&["scan", shipped("square").to_str().unwrap(), "-m", "0,0.01", "-s", "1,2"]);
    let out = stdout(&o);
    let dims: Vec<String> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').skip(2).collect::<Vec<_>>().join(","))
        .collect();
    assert_eq!(dims.len(), 4);
    assert!(dims.iter().all(|d| d == &dims[0]), "{out}");
}

#[test]
fn svg_generators() {
    let o = momentframe(&["svg", shipped("triangle").to_str().unwrap(), "-g", "F:0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no generators"));

    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("square.svg");
    let o = momentframe(&[
        "svg",
        shipped("square").to_str().unwrap(),
        "-g",
        "Nperp:0",
        "-o",
        target.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = std::fs::read_to_string(&target).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("marker-end").count(), 4);

    let o = momentframe(&["svg", shipped("desargues").to_str().unwrap(), "-g", "Nperp:0", "--no-svg-values"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("V1="));
    let o = momentframe(&["svg", shipped("desargues").to_str().unwrap(), "-g", "N:12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("out of range"));
}

#[test]
fn collinear_spatial_bar_fails_checks() {
    // rotation about the bar axis is unconstrained, so H0 N is not zero
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("line.fw");
    std::fs::write(&path, "dim 3\nv 0 0 0 0\nv 1 1 0 0\ne 0 1\n").unwrap();
    let o = momentframe(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(2));
    let doc: ReportDocument = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(!doc.all_pass);
    assert_eq!(doc.rigid_dim, Some(5));
    assert!(stderr(&o).contains("check failed: H0N = 0"), "{}", stderr(&o));
}
