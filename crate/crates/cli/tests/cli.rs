use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use transgress_cli::document::ResultDocument;

fn transgress(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transgress"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let out = transgress(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn describe_adjoint_a2() {
    let v = json(&["describe", "A2:adj"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["kind"], "describe");
    assert_eq!(v["payload"]["center_invariant_factors"], serde_json::json!([3]));
    assert_eq!(v["payload"]["theta"]["entries"], serde_json::json!([[1, 0], [0, 1]]));
    assert_eq!(v["payload"]["pi1_order"], 3);
}

#[test]
fn describe_simply_connected_c3() {
    let v = json(&["describe", "C3:sc"]);
    assert_eq!(v["payload"]["pi1_order"], 1);
    assert_eq!(
        v["payload"]["transition"]["entries"],
        serde_json::json!([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    );
}

#[test]
fn parse_error_exit_code() {
    let out = transgress(&["describe", "X9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("parse error at byte 0"), "{}", stderr(&out));

    let out = transgress(&["tau", "A3:pi1=[1,0,0;1,2]"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("pi1 generator 1"), "{}", stderr(&out));
}

#[test]
fn tau_sp2_mod_2() {
    let v = json(&["tau", "C2:adj", "--mod", "2"]);
    let m = &v["payload"]["modp"];
    assert_eq!(m["kernel_described"], serde_json::json!(["t_2"]));
    assert_eq!(m["cokernel_described"], serde_json::json!(["w_1"]));
    assert_eq!(m["is_isomorphism"], false);
}

#[test]
fn tau_e6_mod_3() {
    let v = json(&["tau", "E6:adj", "--mod", "3"]);
    assert_eq!(v["payload"]["modp"]["kernel"], serde_json::json!([[1, 0, -1, 0, 1, -1]]));
    assert_eq!(v["payload"]["determinant"], 3);
}

#[test]
fn tau_su4_mod_5() {
    let v = json(&["tau", "A3:sc", "--mod", "5"]);
    assert_eq!(v["payload"]["modp"]["is_isomorphism"], true);
}

#[test]
fn composite_modulus_rejected() {
    let out = transgress(&["tau", "A3:sc", "--mod", "6"]);
    assert_eq!(out.status.code(), Some(2));
}

fn ranks(v: &Value) -> Vec<u64> {
    v["payload"]["ranks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["rank"].as_u64().unwrap())
        .collect()
}

#[test]
fn e3_examples() {
    assert_eq!(ranks(&json(&["e3", "A1:sc", "--coeff", "q"])), vec![1, 0, 0, 1]);
    assert_eq!(ranks(&json(&["e3", "A1:adj", "--coeff", "2"])), vec![1, 1, 1, 1]);
    // (1 + q^3)(1 + q^5)
    assert_eq!(
        ranks(&json(&["e3", "A2:sc", "--coeff", "q"])),
        vec![1, 0, 0, 1, 0, 1, 0, 0, 1]
    );
}

#[test]
fn e3_bidegrees_and_truncation() {
    let v = json(&["e3", "A1:adj", "--coeff", "2", "--bidegrees", "--max-degree", "2"]);
    assert_eq!(ranks(&v), vec![1, 1, 1]);
    let b = v["payload"]["bidegrees"].as_array().unwrap();
    assert_eq!(b.len(), 3);
    assert_eq!(b[1], serde_json::json!({"s": 0, "t": 1, "rank": 1}));
}

#[test]
fn e3_cap_refusal() {
    let out = transgress(&["e3", "E6:sc", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("51840"), "{}", stderr(&out));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["e3", "C3:adj", "--coeff", "2", "--json", "--bidegrees"],
        vec!["tau", "D4:adj", "--mod", "2", "--json"],
        vec!["describe", "D6:pi1=[0,0,0,0,1,0]", "--json"],
    ] {
        let a = transgress(&args);
        let mut threaded = args.clone();
        threaded.extend(["--jobs", "3"]);
        let b = transgress(&threaded);
        let c = transgress(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}

#[test]
fn json_round_trips_through_document() {
    for args in [
        vec!["describe", "B3:adj", "--json"],
        vec!["tau", "E7:adj", "--mod", "2", "--json"],
        vec!["e3", "G2", "--bidegrees", "--json"],
    ] {
        let out = transgress(&args);
        let text = String::from_utf8(out.stdout).unwrap();
        let doc = ResultDocument::from_json(&text).unwrap();
        assert_eq!(doc.to_json(), text);
    }
}

#[test]
fn text_and_json_agree() {
    let text = String::from_utf8(transgress(&["tau", "C3:adj", "--mod", "2"]).stdout).unwrap();
    let v = json(&["tau", "C3:adj", "--mod", "2"]);
    for line in v["payload"]["images"].as_array().unwrap() {
        assert!(text.contains(line.as_str().unwrap()));
    }
    assert!(text.contains("kernel: {t_3}"), "{text}");
}

#[test]
fn bundled_fixtures_pass() {
    let out = transgress(&["fixtures"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL"));
    assert!(text.contains("PASS Sp(5) mod 2"));
}

#[test]
fn transposed_cartan_fails_sp_rows() {
    let out = transgress(&["fixtures", "--transpose-cartan"]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8_lossy(&out.stdout);
    for n in 2..=5 {
        assert!(text.contains(&format!("FAIL Sp({n}) mod 2")), "{text}");
    }

    let out = transgress(&["fixtures", &data("flipped.json")]);
    assert_eq!(out.status.code(), Some(3));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL Sp(3) mod 2"), "{text}");
    assert!(text.contains("PASS SU(4) mod 5"), "{text}");
}

#[test]
fn empty_corpus_is_an_error() {
    let out = transgress(&["fixtures", &data("empty.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no fixtures"));
}

#[test]
fn missing_corpus_file() {
    let out = transgress(&["fixtures", &data("does-not-exist.json")]);
    assert_eq!(out.status.code(), Some(2));
}
