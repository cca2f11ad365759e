use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn tdlc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tdlc")).args(args).output().expect("binary runs")
}

fn write_temp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tdlc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn run_report(file: &str) -> Value {
    let o = tdlc(&["report", scenario(file).to_str().unwrap(), "--probe", "16"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    json_of(&o)
}

#[test]
fn shipped_scenarios() {
    let q = run_report("q2_half.json");
    assert_eq!(q["entropy"]["alpha"], "2");
    assert_eq!(q["entropy"]["display"], "log 2");
    assert_eq!(q["entropy"]["certified"], true);
    assert_eq!(q["scale"], "2");
    assert_eq!(q["nub"]["trivial"], true);

    let s = run_report("shift_z2.json");
    assert_eq!(s["entropy"]["alpha"], "2");
    assert_eq!(s["scale"], "1");
    assert_eq!(s["nub"]["whole"], true);

    let f = run_report("finite_s3.json");
    assert_eq!(f["entropy"]["alpha"], "1");
    assert_eq!(f["scale"], "1");
    for c in f["checks"].as_array().unwrap() {
        assert_eq!(c["outcome"], "PASS");
    }

    let d = run_report("diag_half.json");
    let add: Vec<&Value> = d["checks"].as_array().unwrap().iter().filter(|c| c["type"] == "addition").collect();
    assert_eq!(add.len(), 3);
    assert_eq!((&add[0]["total"], &add[0]["restricted"], &add[0]["quotient"]), (&"log 4".into(), &"log 2".into(), &"log 2".into()));

    let l = run_report("laurent_z3.json");
    assert_eq!(l["scale"], "3");

    for name in ["jordan_half.json", "mixed_diag.json", "shift_z4_even.json", "q2_half_x_shift_z2.json", "discrete_z2.json"] {
        assert_eq!(run_report(name)["status"], "ok", "{name}");
    }
}

#[test]
fn csv_rows() {
    let o = tdlc(&["entropy", scenario("q2_half.json").to_str().unwrap(), "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["scenario,quantity,alpha,infinite,certified", "q2_half,entropy,2,false,true"]);
}

#[test]
fn single_quantity_subcommands() {
    let path = scenario("q2_half.json");
    let p = path.to_str().unwrap();
    let s = json_of(&tdlc(&["scale", p]));
    assert_eq!(s["scale"], "2");
    assert!(s.get("entropy").is_none());
    let n = json_of(&tdlc(&["nub", p]));
    assert_eq!(n["nub"]["trivial"], true);
    let t = json_of(&tdlc(&["tidy", p, "--base", "2"]));
    assert_eq!(t["tidy"].as_array().unwrap().len(), 2);
    let c = json_of(&tdlc(&["cotraj", p, "--probe", "8"]));
    assert_eq!(c["checks"][0]["rows"].as_array().unwrap().len(), 9);
    assert_eq!(c["checks"][0]["limit_free_agrees"], true);
}

#[test]
fn out_flag_writes_file() {
    let out = std::env::temp_dir().join(format!("tdlc-out-{}.json", std::process::id()));
    let o = tdlc(&["report", scenario("q2_half.json").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["scale"], "2");
    std::fs::remove_file(out).unwrap();
}

#[test]
fn timing_is_opt_in() {
    let p = scenario("q2_half.json");
    let plain = String::from_utf8(tdlc(&["report", p.to_str().unwrap()]).stdout).unwrap();
    assert!(!plain.contains("timing_ms"));
    let timed = String::from_utf8(tdlc(&["report", p.to_str().unwrap(), "--timing"]).stdout).unwrap();
    assert!(timed.contains("timing_ms"));
}

#[test]
fn invalid_input_exits_2() {
    let unknown = write_temp("unknown.json", r#"{"schema":1,"backend":"padic","prime":2,"matrix":[["1/2"]],"colour":"red"}"#);
    let wrong_schema = write_temp("schema.json", r#"{"schema":7,"backend":"padic","prime":2,"matrix":[["1/2"]]}"#);
    let bad_matrix = write_temp("matrix.json", r#"{"schema":1,"backend":"padic","prime":2,"matrix":[["1/0"]]}"#);
    let bad_check = write_temp("check.json", r#"{"schema":1,"backend":"finite","group":"S3","checks":[{"type":"plot"}]}"#);
    let bad_sub =
        write_temp("sub.json", r#"{"schema":1,"backend":"finite","group":"S3","checks":[{"type":"addition","args":{"subgroup":"nope"}}]}"#);
    for p in [&unknown, &wrong_schema, &bad_matrix, &bad_check, &bad_sub] {
        let o = tdlc(&["report", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{}", p.display());
        assert!(o.stdout.is_empty());
    }
    assert_eq!(tdlc(&["report", "/nonexistent/scenario.json"]).status.code(), Some(2));
    assert_eq!(tdlc(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(tdlc(&["report"]).status.code(), Some(2));
}

#[test]
fn unresolved_exit_code_needs_strict() {
    let p = write_temp("periodic.json", r#"{"schema":1,"backend":"shift","alphabet":[2],"shift":2,"checks":[{"type":"cotraj"}]}"#);
    let args = ["report", p.to_str().unwrap(), "--probe", "12"];
    let relaxed = tdlc(&args);
    assert_eq!(relaxed.status.code(), Some(0));
    assert_eq!(json_of(&relaxed)["status"], "unresolved");
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert_eq!(tdlc(&strict).status.code(), Some(3));
}

#[test]
fn verify_suites() {
    let o = tdlc(&["verify", "indices", "addition", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("suite,case,outcome"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",PASS") || l.ends_with(",SKIPPED")));
    assert!(text.contains("addition,diag_half/axis,PASS"));
    assert!(text.contains("indices,A4/snake,PASS"));

    let v = json_of(&tdlc(&["verify", "scale-link", "--strict"]));
    assert_eq!(v["summary"]["FAIL"], 0);
    assert_eq!(v["summary"]["INCONCLUSIVE"], 0);
}
