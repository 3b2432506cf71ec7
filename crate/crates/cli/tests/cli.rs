use std::path::Path;
use std::process::{Command, Output};

use cosetcx_cli::{CertificateBundle, RunConfig, Section, Verdict};
use serde_json::json;

fn cosetcx(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosetcx")).args(args).arg("--out").arg(out).output().unwrap()
}

fn text(o: &Output) -> String {
    format!("{}{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
}

#[test]
fn invalid_n_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = cosetcx(&["build", "--set", "n=1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("invalid configuration"), "{}", text(&o));
    let o = cosetcx(&["build", "--set", "colour=blue"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_subcommand_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cosetcx(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn huge_truncation_is_refused_before_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let o = cosetcx(&["build", "--set", "s=9999"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let t = text(&o);
    assert!(t.contains("exceeds the enumeration cap") && t.contains("10^"), "{t}");
    assert!(!dir.path().join("complex.json").exists());
}

#[test]
fn build_is_deterministic_and_honours_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# small instance\np = 2\nn = 2\ns = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let oa = cosetcx(&["build", "--config", cfg, "--set", "s=1"], &a);
    let ob = cosetcx(&["build", "--config", cfg, "--set", "s=1"], &b);
    assert_eq!(oa.status.code(), Some(0), "{}", text(&oa));
    assert_eq!(ob.status.code(), Some(0));
    for f in ["complex.json", "skeleton.dot", "group.cxg"] {
        assert_eq!(std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap(), "{f}");
    }
    let complex: serde_json::Value = serde_json::from_slice(&std::fs::read(a.join("complex.json")).unwrap()).unwrap();
    assert_eq!(complex["params"]["s"], 1);
    assert_eq!(complex["vertices"].as_array().unwrap().len(), 63);
    assert_eq!(complex["simplices"].as_array().unwrap().len(), 2);
}

#[test]
fn certify_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = cosetcx(&["certify", "-q", "--set", "s=1"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let path = dir.path().join("certificate.json");
    let o = Command::new(env!("CARGO_BIN_EXE_cosetcx")).arg("report").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let t = text(&o);
    assert!(t.contains("overall: pass") && t.contains("axioms"), "{t}");

    let original = std::fs::read_to_string(&path).unwrap();
    let tampered = dir.path().join("tampered.json");
    std::fs::write(&tampered, original.replacen("\"pass\"", "\"fail\"", 1)).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cosetcx")).arg("report").arg(&tampered).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(text(&o).contains("digest"), "{}", text(&o));

    let other = dir.path().join("other.json");
    std::fs::write(&other, original.replace("cosetcx.certificate/v1", "cosetcx.certificate/v0")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cosetcx")).arg("report").arg(&other).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(text(&o).contains("schema"));
}

#[test]
fn failing_bundle_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let sections = vec![
        Section::new("axioms", true, None, json!({})),
        Section::new("spectra.links", false, Some(1e-9), json!({"lambda2": 0.9})).with_witness(Some("pair (0,1): lambda2 0.9".into())),
    ];
    let b = CertificateBundle::new(RunConfig::default(), sections);
    assert_eq!(b.overall, Verdict::Fail);
    let path = dir.path().join("certificate.json");
    std::fs::write(&path, b.to_json()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cosetcx")).arg("report").arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let t = text(&o);
    assert!(t.contains("overall: FAIL") && t.contains("first failure: spectra.links: pair (0,1)"), "{t}");
}

#[test]
fn capped_sections_are_skipped_not_failed() {
    let dir = tempfile::tempdir().unwrap();
    let o = cosetcx(&["certify", "--set", "cap=1000", "--set", "direct_mu=false"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let b = CertificateBundle::from_json(&std::fs::read_to_string(dir.path().join("certificate.json")).unwrap()).unwrap();
    assert_eq!(b.overall, Verdict::Pass);
    let annotated = b.sections.iter().filter(|s| s.note.is_some()).count();
    assert!(annotated > 0);
    for s in b.sections.iter().filter(|s| s.verdict == Verdict::Skipped) {
        assert!(s.note.as_deref().is_some_and(|n| !n.is_empty()), "{}", s.name);
    }
    assert!(text(&o).contains("verified at s=1 instance"), "{}", text(&o));
}

#[test]
fn spectra_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = cosetcx(&["spectra", "-q", "--set", "s=2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let csv = std::fs::read_to_string(dir.path().join("spectra.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("i,j,adjacent,group_order"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn quotient_target_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = cosetcx(&["quotient", "-q", "--set", "s=3", "--set", "samples=500", "--target", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", text(&o));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("quotient.json")).unwrap()).unwrap();
    assert!(v.to_string().contains("\"verdict\":\"pass\""));
}
