use std::io::Write;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn hecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(args)
        .env_remove("HECKE_BUDGET")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: stdout={} stderr={}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

fn temp_json(v: &Value) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{v}").unwrap();
    f
}

#[test]
fn classify_examples() {
    let out = hecke(&["--pair", "sl2:2", "classify", r#"[["2","0"],["0","1/2"]]"#]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!((v["n"].clone(), v["L"].clone(), v["R"].clone(), v["delta"].clone()), (json!(1), json!(6), json!(6), json!("1")));

    let v = json_of(&hecke(&["--pair", "dihedral", "classify", "[-5, -1]"]));
    assert_eq!((v["n"].clone(), v["L"].clone(), v["R"].clone(), v["delta"].clone()), (json!(5), json!(2), json!(2), json!("1")));

    for (pair, e) in [("dihedral", "[0, 1]"), ("dyadic", r#"["0", 0]"#), ("sl2:3", "[[1,0],[0,1]]")] {
        let v = json_of(&hecke(&["--pair", pair, "classify", e]));
        assert_eq!((v["L"].clone(), v["R"].clone(), v["delta"].clone()), (json!(1), json!(1), json!("1")), "{pair}");
    }

    let v = json_of(&hecke(&["--pair", "dyadic", "classify", r#"["1/2", 2]"#]));
    assert_eq!((v["L"].clone(), v["R"].clone(), v["delta"].clone()), (json!(4), json!(1), json!("4")));
}

#[test]
fn finite_pair_from_file() {
    let spec = json!({"n": 3, "group_gens": [[1, 0, 2], [1, 2, 0]], "subgroup_gens": [[1, 0, 2]]});
    let file = temp_json(&spec);
    let pair = format!("finite:{}", file.path().display());
    let v = json_of(&hecke(&["--pair", &pair, "classify", "[1, 2, 0]"]));
    assert_eq!((v["L"].clone(), v["R"].clone()), (json!(2), json!(2)));
    let out = hecke(&["--pair", "finite:/nonexistent/spec.json", "classify", "[0, 1, 2]"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn algebra_examples() {
    let e1 = temp_json(&json!({"terms": [{"coset": [1, 1], "re": "1"}]}));
    let path = e1.path().to_str().unwrap();
    let v = json_of(&hecke(&["--pair", "dihedral", "algebra", "mul", path, path]));
    assert_eq!(
        v,
        json!({"terms": [{"coset": [0, 1], "re": "2", "im": "0"}, {"coset": [2, 1], "re": "1", "im": "0"}]})
    );

    let v = json_of(&hecke(&["--pair", "sl2:2", "algebra", "star", "builtin:unit"]));
    assert_eq!(v, json!({"terms": [{"coset": [["1", "0"], ["0", "1"]], "re": "1", "im": "0"}]}));

    let v = json_of(&hecke(&["--pair", "sl2:2", "algebra", "rinner", "builtin:counterexample", "builtin:counterexample"]));
    assert_eq!(
        v,
        json!({"terms": [
            {"coset": [["1", "0"], ["0", "1"]], "re": "3", "im": "0"},
            {"coset": [["2", "0"], ["0", "1/2"]], "re": "1", "im": "0"}
        ]})
    );

    let v = json_of(&hecke(&["--pair", "dyadic", "algebra", "norm", r#"{"terms": [{"coset": ["0", 1], "re": 3, "im": 4}]}"#]));
    assert_eq!((v["norm"].clone(), v["kind"].clone()), (json!("10"), json!("exact")));
}

#[test]
fn emitted_elements_reparse() {
    let out = hecke(&["--pair", "sl2:2", "algebra", "rinner", "builtin:counterexample", "builtin:counterexample"]);
    let first = json_of(&out);
    let file = temp_json(&first);
    let again = json_of(&hecke(&["--pair", "sl2:2", "algebra", "star", file.path().to_str().unwrap()]));
    // ⟨f,f⟩_R is self-adjoint
    assert_eq!(again, first);
    let unit = json_of(&hecke(&["--pair", "sl2:2", "algebra", "mul", file.path().to_str().unwrap(), "builtin:unit"]));
    assert_eq!(unit, first);
}

#[test]
fn spherical_scan_examples() {
    let out = hecke(&["spherical-scan", "--q", "2", "--f", "builtin:counterexample"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["certificate"]["z"], "-2");
    assert_eq!(v["certificate"]["value"], "-1");
    assert_eq!(v["certificate"]["conclusion"], "not_R_positive");

    let out = hecke(&["spherical-scan", "--q", "2", "--f", "builtin:unit", "--expect-negative"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json_of(&out)["certificate"], Value::Null);

    let out = hecke(&["--pair", "sl2:3", "spherical-scan", "--expect-negative"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["certificate"]["value"], "-4");

    let out = hecke(&["spherical-scan", "--q", "2", "--z-grid", "default,1"]);
    assert_eq!(code(&out), 65);
    let out = hecke(&["spherical-scan", "--q", "2", "--z-grid", "-5"]);
    assert_eq!(code(&out), 65);
    let out = hecke(&["spherical-scan", "--q", "2", "--z-grid", "-5", "--allow-outside-domain", "--expect-negative"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json_of(&out)["rows"][0]["admissible"], false);
    let out = hecke(&["spherical-scan", "--q", "4"]);
    assert_eq!(code(&out), 65);
    let out = hecke(&["spherical-scan", "--q", "2", "--z-grid", "x/y"]);
    assert_eq!(code(&out), 64);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&hecke(&["--pair", "dihedral", "classify", "[1"])), 64);
    assert_eq!(code(&hecke(&["--pair", "sl2:2", "classify", "[[2,0],[0,1]]"])), 65);
    assert_eq!(code(&hecke(&["--pair", "sl2:2", "classify", r#"[["1/3",0],[0,3]]"#])), 65);
    assert_eq!(code(&hecke(&["--pair", "sl2:6", "classify", "[[1,0],[0,1]]"])), 65);
    assert_eq!(code(&hecke(&["--pair", "nowhere", "classify", "[0,1]"])), 64);
    assert_eq!(code(&hecke(&["classify", "[0,1]"])), 64);
    assert_eq!(code(&hecke(&["--pair", "dihedral", "algebra", "rinner", "builtin:counterexample", "builtin:unit"])), 65);
    assert_eq!(code(&hecke(&["--pair", "dyadic", "--budget", "4", "classify", r#"["0", 3]"#])), 69);
    let out = Command::new(env!("CARGO_BIN_EXE_hecke"))
        .args(["--pair", "dyadic", "classify", r#"["0", 3]"#])
        .env("HECKE_BUDGET", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 69);
    assert_eq!(code(&hecke(&["verify", "--suite", "nope"])), 64);
}

#[test]
fn growth_reports() {
    let out = hecke(&["--pair", "dihedral", "growth", "--set", "[[0,1],[1,1]]", "--nmax", "10"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["rows"][10]["L"], 23);
    assert_eq!(v["truncated"], false);
    assert_eq!(v["classification"]["heuristic"], true);

    let out = hecke(&["--pair", "dihedral", "--output", "csv", "growth", "--set", "[[0,1],[1,1]]", "--nmax", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "n,size,L,root,ratio\n0,2,3,,\n1,3,5,5.00000,1.66667\n2,4,7,2.64575,1.40000\n");

    let out = hecke(&["--pair", "sl2:2", "growth", "--set", r#"[[[1,0],[0,1]],[["2",0],[0,"1/2"]]]"#, "--nmax", "3"]);
    let v = json_of(&out);
    let ls: Vec<_> = v["rows"].as_array().unwrap().iter().map(|r| r["L"].as_u64().unwrap()).collect();
    assert_eq!(ls, vec![7, 31, 127, 511]);

    let out = hecke(&["--pair", "sl2:2", "--budget", "50", "growth", "--set", r#"[[["2",0],[0,"1/2"]]]"#, "--nmax", "3"]);
    assert_eq!(code(&out), 69);
    assert_eq!(json_of(&out)["truncated"], true);
}

#[test]
fn verify_is_deterministic() {
    let a = hecke(&["verify", "--suite", "algebra", "--trials", "20", "--seed", "7"]);
    let b = hecke(&["--seed", "7", "verify", "--suite", "algebra", "--trials", "20"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    assert_eq!(v["seed"], 7);
    assert!(v["properties"].as_array().unwrap().iter().all(|p| p["trials"] == 20 && p["passed"] == true));

    let table = hecke(&["--output", "table", "verify", "--suite", "spherical", "--trials", "5"]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.starts_with("# suite=spherical seed=0 trials=5"));
    assert!(text.contains("character_multiplicativity"));
    assert!(text.contains("negativity_q_le_13"));
}
