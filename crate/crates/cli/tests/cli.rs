use std::path::PathBuf;
use std::process::{Command, Output};

use nakayama::{AlgebraContext, DecompositionMultiset};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nakayama")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(args: &[&str]) -> (Vec<String>, i32) {
    let o = run(args);
    (stdout(&o).lines().map(str::to_string).collect(), o.status.code().unwrap())
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("nakayama-cli-{}-{name}", std::process::id()))
}

#[test]
fn tensor_examples() {
    let (out, code) = lines(&["tensor", "--n", "2", "B(1,2,1)", "B(1,3,1)", "--mode", "both"]);
    assert_eq!((out, code), (vec!["B(1,2,1) + B(1,4,1)".to_string(), "MATCH".to_string()], 0));

    let (out, code) = lines(&["tensor", "--n", "1", "B(1,1,1)", "M(1|1,1)"]);
    assert_eq!((out, code), (vec!["M(1|1,1)".to_string()], 0));

    let (out, code) = lines(&["tensor", "--n", "3", "M(1|1,1)", "M(1|1,1)", "--mode", "both"]);
    assert_eq!(code, 0);
    assert_eq!(out[1], "MATCH");
    let c = AlgebraContext::new(3).unwrap();
    let m = DecompositionMultiset::parse(&out[0], &c).unwrap();
    assert!(m.contains(&nakayama::Descriptor::parse("M(1|2,0)", &c).unwrap()));
    assert_eq!(m.to_string(), out[0]);
}

#[test]
fn printed_multisets_reparse() {
    let c = AlgebraContext::new(2).unwrap();
    for (x, y) in [("W(1|2,1)", "M(1|1,1)"), ("B(2,2,1/2)", "B(1,2,-1)"), ("P(1|2)", "N(2|1,1)")] {
        let (out, code) = lines(&["tensor", "--n", "2", x, y, "--mode", "oracle"]);
        assert_eq!(code, 0);
        assert_eq!(DecompositionMultiset::parse(&out[0], &c).unwrap().to_string(), out[0]);
    }
}

#[test]
fn exit_codes() {
    let o = run(&["tensor", "--n", "2", "M(1|1", "B(1,1,1)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 5"));

    let o = run(&["tensor", "--n", "3", "B(1,3,1)", "B(1,3,1)", "--mode", "oracle", "--cap", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("exceeds cap 10"));

    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["graph", "--n", "2", "M(1|1,0)", "--format", "svg"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn cell_examples() {
    for (d, want) in [
        ("M(1|1,0)", "J(0); left=(col 1, width 2, MN); right=(row 1, height 2, MS)"),
        ("B(1,1,1)", "Band; left=band; right=band"),
        ("L(1|2)", "Split; left=S_right:2; right=S_left:1"),
    ] {
        assert_eq!(lines(&["cell", "--n", "2", d]), (vec![want.to_string()], 0));
    }
}

#[test]
fn graphs() {
    let out = stdout(&run(&["graph", "--n", "3", "M(1|1,1)"]));
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("[label=\"id\"]").count(), 4);
    assert_eq!(out.lines().filter(|l| l.trim_start().starts_with("v_") && !l.contains("->")).count(), 5);

    let out = stdout(&run(&["graph", "--n", "2", "B(1,2,1)"]));
    assert_eq!(out.matches("J_2(1)").count(), 1);
    assert_eq!(out.matches("->").count(), 4);

    let out = stdout(&run(&["graph", "--n", "2", "P(1|1)"]));
    for v in ["v_1_1", "v_1_2", "v_2_1", "v_2_2"] {
        assert!(out.contains(&format!("{v} [")), "{out}");
    }
    assert_eq!(out.matches("->").count(), 4);

    let out = stdout(&run(&["graph", "--n", "1", "B(1,1,1)"]));
    assert_eq!(out.matches("v_1_1 -> v_1_1").count(), 2);
}

#[test]
fn check_reports() {
    let small = ["check", "--n", "1,2", "--max-valleys", "1", "--max-m", "1", "--lambdas", "1", "--max-cell-valleys", "1"];
    let a = scratch("a.json");
    let b = scratch("b.json");
    let mut one: Vec<&str> = small.to_vec();
    one.extend(["--jobs", "1", "--report", a.to_str().unwrap()]);
    let mut two: Vec<&str> = small.to_vec();
    two.extend(["--jobs", "2", "--report", b.to_str().unwrap()]);
    assert_eq!(run(&one).status.code(), Some(0));
    assert_eq!(run(&two).status.code(), Some(0));
    let (ra, rb) = (std::fs::read_to_string(&a).unwrap(), std::fs::read_to_string(&b).unwrap());
    assert_eq!(ra, rb);
    let v: serde_json::Value = serde_json::from_str(&ra).unwrap();
    assert_eq!(v["summary"]["failed"].as_array().unwrap().len(), 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));

    let mut faulty: Vec<&str> = small.to_vec();
    faulty.push("--inject-fault");
    let o = run(&faulty);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["failed"][0], "symbolic_vs_oracle");
    let _ = std::fs::remove_file(a);
    let _ = std::fs::remove_file(b);
}

#[test]
fn realize_then_decompose() {
    let path = scratch("x.json");
    for d in ["N(2|1,2)", "B(2,2,-1)", "split(Pl:1,Sr:3)"] {
        let o = run(&["realize", "--n", "3", d]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::write(&path, &o.stdout).unwrap();
        let o = run(&["decompose", path.to_str().unwrap(), "--seed", "4"]);
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["multiset"], d, "{v}");
        assert_eq!(v["complete"], true);
        assert_eq!(v["input_hash"].as_str().unwrap().len(), 64);
    }
    std::fs::write(&path, r#"{"n": 1, "dims": [[1]], "vmaps": [[[["1"]]]], "hmaps": [[[["0"]]]]}"#).unwrap();
    assert_eq!(run(&["decompose", path.to_str().unwrap()]).status.code(), Some(1));
    let _ = std::fs::remove_file(path);
}

#[test]
fn cells_and_witnesses() {
    let (out, code) = lines(&["cells", "--n", "2", "--cell", "J(0),Split"]);
    assert_eq!(code, 0);
    assert_eq!(out[0], "descriptor,two_sided,left,right");
    assert_eq!(out.len(), 1 + 4 + 16);
    assert_eq!(out[1], "\"M(1|1,0)\",J(0),\"(col 1, width 2, MN)\",\"(row 1, height 2, MS)\"");

    let (out, _) = lines(&["witness", "--n", "3", "M(1|1,2)", "M(1|1,1)"]);
    assert!(out[0].starts_with("no witness within budget"));
    let (out, _) = lines(&["witness", "--n", "3", "--side", "right", "M(1|2,0)", "M(1|1,1)"]);
    assert!(out[0].starts_with("Z = "), "{out:?}");
    let (out, _) = lines(&["witness", "--n", "2", "M(1|1,1)", "M(1|1,1)"]);
    assert!(out[0].starts_with("Z = B(1,1,1)"));
}
