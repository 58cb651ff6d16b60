use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn perfcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perfcx")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = perfcx(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn generated_fn_is_valid_minimal_and_certified() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "f3.json", &["fn", "--n", "3"]);
    let f = f.to_str().unwrap();
    assert_eq!(perfcx(&["analyze", "validate", f]).status.code(), Some(0));
    let o = perfcx(&["analyze", "certify", f, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let cert: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(cert["verdict"], "certified", "{cert}");
    let o = perfcx(&["analyze", "width", f]);
    assert_eq!(stdout(&o), "width 3\n");
    let o = perfcx(&["analyze", "minimize", f]);
    assert!(stdout(&o).contains("split-off pieces 0"));
}

#[test]
fn tampered_complex_fails_validation_with_exit_1() {
    let dir = TempDir::new().unwrap();
    let path = generate(dir.path(), "f3.json", &["fn", "--n", "3"]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let entry = &mut v["diffs"]["-1"][0][0];
    assert_eq!(entry, "x");
    *entry = Value::from("-x");
    std::fs::write(&path, v.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let o = perfcx(&["analyze", "validate", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("violation"));
    // the other analyses refuse to read it unless told not to check
    assert_eq!(perfcx(&["analyze", "certify", p]).status.code(), Some(1));
}

#[test]
fn scrambled_sum_decomposes_at_both_levels() {
    let dir = TempDir::new().unwrap();
    let path = generate(dir.path(), "s.json", &["scrambled", "--plan", "(0,c2),(0,c3),(1,f)", "--seed", "7"]);
    let p = path.to_str().unwrap();
    let o = perfcx(&["analyze", "decompose", p, "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.to_string().contains("\"6\""), "{report}");
    let o = perfcx(&["analyze", "decompose", p, "--refine", "primary", "--json"]);
    let text = stdout(&o);
    assert!(text.contains("\"2\"") && text.contains("\"3\"") && !text.contains("\"6\""), "{text}");
    let o = perfcx(&["analyze", "cohomology", p]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn capability_and_usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let k = generate(dir.path(), "k.json", &["koszul", "--n", "2"]);
    let k = k.to_str().unwrap();
    // cohomology needs a PID; Q[x, y] localized is not one
    assert_eq!(perfcx(&["analyze", "cohomology", k]).status.code(), Some(2));
    let s = generate(dir.path(), "s.json", &["scrambled", "--plan", "(0,c4)"]);
    assert_eq!(perfcx(&["analyze", "minimize", s.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(perfcx(&["gen", "koszul", "--n", "3", "--ring", "q-local:2"]).status.code(), Some(2));
    assert_eq!(perfcx(&["gen", "fn"]).status.code(), Some(2));
    assert_eq!(perfcx(&["analyze", "validate", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(perfcx(&["bogus"]).status.code(), Some(2));
}

#[test]
fn refused_certificate_and_refinement_exit_1() {
    let dir = TempDir::new().unwrap();
    let f = generate(dir.path(), "f.json", &["fn", "--n", "2"]);
    let text = std::fs::read_to_string(&f).unwrap();
    // f_2 ⊕ f_2 has rank 2 in the top degree
    let v: Value = serde_json::from_str(&text).unwrap();
    let doubled = double(&v);
    let d = dir.path().join("ff.json");
    std::fs::write(&d, doubled.to_string()).unwrap();
    let o = perfcx(&["analyze", "certify", d.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("(a)"), "{}", stdout(&o));

    let q = generate(dir.path(), "q.json", &["scrambled", "--ring", "q[x]", "--plan", "(0,cx^2+1)"]);
    let o = perfcx(&["analyze", "decompose", q.to_str().unwrap(), "--refine", "primary"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stdout.is_empty());
}

/// Block-diagonal self-sum of a complex given in JSON.
fn double(v: &Value) -> Value {
    let mut out = v.clone();
    for (deg, r) in v["ranks"].as_object().unwrap() {
        out["ranks"][deg] = Value::from(2 * r.as_u64().unwrap());
    }
    for (deg, m) in v["diffs"].as_object().unwrap() {
        let rows = m.as_array().unwrap();
        let cols = rows[0].as_array().unwrap().len();
        let mut big = Vec::new();
        for copy in 0..2 {
            for row in rows {
                let mut line = vec![Value::from("0"); 2 * cols];
                for (j, e) in row.as_array().unwrap().iter().enumerate() {
                    line[copy * cols + j] = e.clone();
                }
                big.push(Value::from(line));
            }
        }
        out["diffs"][deg] = Value::from(big);
    }
    out
}

#[test]
fn demos_are_deterministic_and_honor_seeds() {
    let a = perfcx(&["demo", "dedekind", "--trials", "20", "--seed", "5", "--json"]);
    let b = perfcx(&["demo", "dedekind", "--trials", "20", "--seed", "5", "--json"]);
    let c = perfcx(&["demo", "dedekind", "--trials", "20", "--seed", "6", "--json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["trials"], 20);
    let o = perfcx(&["demo", "local", "--max-n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(perfcx(&["demo", "local", "--max-n", "0"]).status.code(), Some(2));
}
