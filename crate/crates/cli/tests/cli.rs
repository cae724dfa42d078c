use std::path::PathBuf;
use std::process::{Command, Output};

fn fcell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fcell"))
        .args(args)
        .env_remove("FCELL_DEFAULT_Q")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fcell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

const BORROMEAN: &str = r#"{
  "format": 1,
  "components": 3,
  "longitudes": ["m2^-1 m3^-1 m2 m3", "m3^-1 m1^-1 m3 m1", "m1^-1 m2^-1 m1 m2"]
}"#;

const FIG2: &str = r#"{
  "format": 1,
  "kind": "surface",
  "children": [
    {"kind": "link", "link": "bing:1", "children": [
      {"kind": "surface", "children": [
        {"kind": "link", "link": "bing:1", "children": [{"kind": "handle"}, {"kind": "handle"}]},
        {"kind": "link", "link": "bing:1", "children": [{"kind": "handle"}, {"kind": "handle"}]}
      ]},
      {"kind": "handle"}
    ]}
  ]
}"#;

#[test]
fn mu_of_a_link_file() {
    let p = scratch("borromean.json", BORROMEAN);
    let o = fcell(&["mu", "--link", p.to_str().unwrap(), "--index", "1,2,3", "--q", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "mu_bar(123) = 1 (mod 0)");
}

#[test]
fn tree_basis_of_a_tree_file() {
    let p = scratch("fig2.json", FIG2);
    let o = fcell(&["tree-basis", "--tree", p.to_str().unwrap(), "--kind", "q"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let monos: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(monos, ["x1.x2.x5", "x3.x4.x5"]);
}

#[test]
fn json_output_parses() {
    let o = fcell(&["--format", "json", "obstruct", "--link", "builtin:borromean", "--trees", "builtin:handle,builtin:fig1-cell,builtin:handle"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["format"], 1);
    assert_eq!(v["verdict"], "Obstructed");
    assert_eq!(v["mu"]["modulus"], 0);
}

#[test]
fn trivial_reports_witness() {
    let o = fcell(&["trivial", "--link", "builtin:hopf"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(2;1)"));
    let o = fcell(&["trivial", "--link", "builtin:unlink(3)"]);
    assert!(stdout(&o).starts_with("trivial"));
}

#[test]
fn default_q_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_fcell"))
        .args(["trivial", "--link", "builtin:borromean"])
        .env("FCELL_DEFAULT_Q", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("too small"));
}

#[test]
fn exit_codes() {
    assert_eq!(fcell(&["mu", "--link", "/nonexistent.json", "--index", "1,2"]).status.code(), Some(2));
    assert_eq!(fcell(&["mu", "--link", "builtin:hopf", "--index", "1,5"]).status.code(), Some(2));
    let bad = scratch("bad.json", r#"{"format":1,"components":2,"longitudes":["m2"]}"#);
    assert_eq!(fcell(&["mu", "--link", bad.to_str().unwrap(), "--index", "1,2"]).status.code(), Some(2));
    let split = scratch("hopf_plus.json", r#"{"format":1,"components":3,"longitudes":["m2","m1","1"]}"#);
    let h = "builtin:handle";
    let refused = fcell(&["obstruct", "--link", split.to_str().unwrap(), "--trees", &format!("{h},{h},{h}")]);
    assert_eq!(refused.status.code(), Some(1), "{}", String::from_utf8_lossy(&refused.stderr));
}

#[test]
fn composition_and_bing_patterns() {
    let o = fcell(&["admissible", "--pattern", "builtin:bing(2)"]);
    assert!(stdout(&o).contains("admissible: yes"));
    let o = fcell(&["--format", "json", "compose", "--link", "builtin:hopf", "--pattern", "builtin:bing:1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["components"], 3);
}

#[test]
fn selftest_is_deterministic() {
    let a = fcell(&["selftest", "--seed", "5"]);
    let b = fcell(&["selftest", "--seed", "5"]);
    assert!(a.status.success(), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().filter(|l| l.contains("[PASS]")).count(), 10);
}
