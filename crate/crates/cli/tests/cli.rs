//! End-to-end runs of the `horotube` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horotube"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("horotube-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn classify_parabolic_case() {
    let o = run(&["classify", "--theta", "pi/3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.contains("I1I3I2I3"))
        .expect("I1I3I2I3 line");
    assert!(line.contains("parabolic"), "{line}");
}

#[test]
fn classify_loxodromic_at_zero() {
    let o = run(&["classify", "--theta", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.contains("I1I3I2I3"))
        .expect("I1I3I2I3 line");
    assert!(line.contains("loxodromic") && line.contains("15"), "{line}");
}

#[test]
fn classify_elliptic_beyond_range() {
    let o = run(&["classify", "--theta", "1.2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text
        .lines()
        .find(|l| l.contains("I1I3I2I3"))
        .expect("I1I3I2I3 line");
    assert!(line.contains("elliptic"), "{line}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(
        run(&["verify", "boundary", "--theta", "0.5"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "horoballs", "--theta", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "triple", "--theta", "1.2"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["classify", "--theta", "half"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "pairwise", "--grid", "32"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["export", "c0", "--theta", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn triple_suite_passes_and_writes_json() {
    let dir = temp_dir("triple");
    std::fs::create_dir_all(&dir).unwrap();
    let json = dir.join("triple.json");
    let o = run(&[
        "verify",
        "triple",
        "--theta",
        "0",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let claims = report["claims"].as_array().unwrap();
    assert!(!claims.is_empty());
    assert_eq!(report["summary"]["passed"], report["summary"]["total"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn horoball_suite_passes() {
    let o = run(&["verify", "horoballs", "--theta", "pi/3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn presentation_output() {
    let o = run(&["presentation"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for needle in ["v^2 w u w^-3 u", "a^2 c b^4 c", "Z^2 + Z/2 (both)"] {
        assert!(text.contains(needle), "missing {needle}:\n{text}");
    }
}

#[test]
fn exports_write_files() {
    let dir = temp_dir("export");
    let out = dir.to_str().unwrap();
    for (what, files) in [
        ("c0", &["c0.csv", "c0.obj"][..]),
        ("rcircle", &["rcircle.csv", "rcircle.obj"][..]),
        ("complex", &["complex.json", "complex.obj"][..]),
        ("polyhedron", &["polyhedron.json", "polyhedron.obj"][..]),
    ] {
        let o = run(&["export", what, "--grid", "64", "--out", out]);
        assert_eq!(o.status.code(), Some(0), "{what}");
        for f in files {
            let text = std::fs::read_to_string(dir.join(f)).unwrap();
            assert!(text.lines().count() > 5, "{f}");
        }
    }
    let o = run(&[
        "export",
        "triple-curves",
        "--theta",
        "0",
        "--grid",
        "64",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.join("triple-curves.csv")).unwrap();
    assert!(csv.starts_with("kind,label,alpha,beta,w,x,y,t"));
    for label in ["L1", "C1", "C2"] {
        assert!(csv.contains(&format!(",{label},")), "{label}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exports_are_deterministic() {
    let a = temp_dir("det-a");
    let b = temp_dir("det-b");
    for dir in [&a, &b] {
        let o = run(&[
            "export",
            "spheres",
            "--k-window",
            "1",
            "--grid",
            "64",
            "--out",
            dir.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let x = std::fs::read(a.join("spheres.obj")).unwrap();
    let y = std::fs::read(b.join("spheres.obj")).unwrap();
    assert!(!x.is_empty());
    assert_eq!(x, y);
    std::fs::remove_dir_all(&a).unwrap();
    std::fs::remove_dir_all(&b).unwrap();
}

#[test]
fn unwritable_output_exits_3() {
    let dir = temp_dir("blocked");
    std::fs::write(&dir, "not a directory").unwrap();
    let o = run(&[
        "export",
        "rcircle",
        "--grid",
        "64",
        "--out",
        dir.join("sub").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    std::fs::remove_file(&dir).unwrap();
}
