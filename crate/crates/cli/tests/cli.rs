use std::path::Path;
use std::process::{Command, Output};

const TREFOIL: &str = "chains 2\nend 1 bottom 0 +\nend 2 bottom 1 +\ncross 1 3\ncap 1 2 5\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divide-forge")).args(args).output().expect("binary runs")
}

fn file(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn validate_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let f = file(dir.path(), "a.div", TREFOIL);
    let o = run(&["validate", &f]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("ok: n=2 delta=1"));
}

#[test]
fn exit_codes_separate_parse_validation_and_usage() {
    let dir = tempfile::tempdir().unwrap();
    let junk = file(dir.path(), "junk.div", "chains 1\nfrobnicate 1\n");
    assert_eq!(run(&["validate", &junk]).status.code(), Some(1));
    let open = file(dir.path(), "open.div", "chains 1\nend 1 bottom 0 -\n");
    assert_eq!(run(&["validate", &open]).status.code(), Some(2));
    assert_eq!(run(&["invariants", &open]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["validate", "/nonexistent/x.div"]).status.code(), Some(4));
}

#[test]
fn invariants_json_has_trefoil_jones() {
    let dir = tempfile::tempdir().unwrap();
    let f = file(dir.path(), "a.div", TREFOIL);
    let o = run(&["invariants", &f, "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["determinant"], 3);
    assert_eq!(v["chi_s"], -1);
}

#[test]
fn crosscheck_passes_and_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let f = file(dir.path(), "a.div", TREFOIL);
    let a = run(&["crosscheck", &f, "--json"]);
    let b = run(&["crosscheck", &f, "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["equal"], true);
    assert_eq!(v["jones_a"], v["jones_b"]);
}

#[test]
fn svg_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = file(dir.path(), "a.div", TREFOIL);
    for cmd in ["render", "double", "diagram", "braid"] {
        let (p, q) = (dir.path().join("p.svg"), dir.path().join("q.svg"));
        assert!(run(&[cmd, &f, "--svg", p.to_str().unwrap()]).status.success(), "{cmd}");
        assert!(run(&[cmd, &f, "--svg", q.to_str().unwrap()]).status.success(), "{cmd}");
        let svg = std::fs::read_to_string(&p).unwrap();
        assert!(svg.contains("<svg"), "{cmd}");
        assert_eq!(svg, std::fs::read_to_string(&q).unwrap(), "{cmd}");
    }
}

#[test]
fn from_braid_output_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["from-braid", "s1 s1 s1", "--strands", "2"]);
    assert!(o.status.success());
    let f = file(dir.path(), "b.div", &stdout(&o));
    let inv = run(&["invariants", &f, "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&inv.stdout).unwrap();
    assert_eq!(v["determinant"], 3);
    assert_eq!(run(&["from-braid", "s1 s2'"]).status.code(), Some(2));
}

#[test]
fn from_tree_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let f = file(dir.path(), "t.tree", "chains 3\nycup 1 2 3 0\nend 1 top 10\nend 2 top 20\nend 3 top 30\ndeg2 2 15\n");
    let a = run(&["from-tree", &f, "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, run(&["from-tree", &f, "--seed", "7"]).stdout);
    assert!(run(&["from-tree", &f]).status.success());
}

#[test]
fn fuzz_summary() {
    let o = run(&["fuzz", "--count", "20", "--size", "6", "--seed", "9"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "seed=9 cases=20 failures=0");
}
