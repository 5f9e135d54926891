use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use discjet::codec;
use discjet::{CoordRingElement, JetAutomorphism, MultiIndex};
use serde_json::Value;
use tempfile::TempDir;

fn discjet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discjet")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

const T_PLUS_T2: &str = r#"{"schema":"discjet/1","n":1,"c":4,"base":{"nilpotents":[]},
  "components":[{"dim":1,"order":4,"terms":[{"J":[1],"coef":"1"},{"J":[2],"coef":"1"}]}]}"#;

fn jet(text: &str) -> JetAutomorphism {
    codec::jet_from_json(&codec::open(&codec::parse_text(text).unwrap()).unwrap()).unwrap()
}

#[test]
fn invert_of_t_plus_t_squared() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "g.json", T_PLUS_T2);
    let inv = jet(&stdout(&discjet(&["invert", "--in", arg(&g)])));
    let coeffs: Vec<String> =
        (1..=4).map(|j| inv.coeff(0, &MultiIndex::new(vec![j])).to_string()).collect();
    assert_eq!(coeffs, ["1", "-1", "2", "-5"]);
}

#[test]
fn coproduct_matches_the_golden_file() {
    let golden = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/golden/coproduct_n1_c4.json")).unwrap();
    assert_eq!(stdout(&discjet(&["coproduct", "--n", "1", "--c", "4"])), golden);
}

#[test]
fn symbolic_composition_table() {
    let text = stdout(&discjet(&["compose", "--symbolic", "--n", "1", "--c", "4"]));
    let rs: JetAutomorphism<CoordRingElement> =
        codec::jet_from_json(&codec::open(&codec::parse_text(&text).unwrap()).unwrap()).unwrap();
    let coeff = |j: u32| rs.coeff(0, &MultiIndex::new(vec![j])).numerator().to_string();
    assert_eq!(coeff(1), "1");
    assert_eq!(coeff(2), "r2 + s2");
    assert_eq!(coeff(3), "2*r2*s2 + r3 + s3");
    assert_eq!(coeff(4), "r2*s2^2 + 2*r2*s3 + 3*r3*s2 + r4 + s4");
}

#[test]
fn compose_with_inverse_round_trips_through_files() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.json");
    let inv = dir.path().join("inv.json");
    let id = dir.path().join("id.json");
    stdout(&discjet(&["sample", "--n", "2", "--c", "3", "--base", "[2,3]", "--seed", "11", "--out", arg(&g)]));
    stdout(&discjet(&["invert", "--in", arg(&g), "--out", arg(&inv)]));
    stdout(&discjet(&["compose", "--in", arg(&g), "--in", arg(&inv), "--out", arg(&id)]));
    assert!(jet(&fs::read_to_string(&id).unwrap()).is_identity());
    // no temp files left behind by the atomic writes
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);

    // re-encoding a decoded document reproduces it byte for byte
    let text = fs::read_to_string(&g).unwrap();
    assert_eq!(codec::render(&codec::document(codec::jet_to_json(&jet(&text)))), text);
}

#[test]
fn split_recomposes() {
    let dir = TempDir::new().unwrap();
    let g = dir.path().join("g.json");
    stdout(&discjet(&["sample", "--n", "1", "--c", "4", "--base", "[2]", "--seed", "3", "--out", arg(&g)]));
    let split: Value = serde_json::from_str(&stdout(&discjet(&["split", "--in", arg(&g)]))).unwrap();
    let with_schema = |v: &Value| {
        let mut v = v.clone();
        v["schema"] = Value::from(codec::SCHEMA);
        codec::render(&v)
    };
    let lin = jet(&with_schema(&split["linear"]));
    let u = jet(&with_schema(&split["unipotent"]));
    assert!(u.is_in_k_u());
    let k = lin.compose(&u).unwrap();
    let original = jet(&fs::read_to_string(&g).unwrap());
    assert!(k.is_in_k());
    assert_eq!(split["translation"].as_array().unwrap().len(), 1);
    assert_eq!(original.components()[0].coeff(&MultiIndex::new(vec![1])), k.components()[0].coeff(&MultiIndex::new(vec![1])));
}

#[test]
fn representation_verbs() {
    let dir = TempDir::new().unwrap();
    let rep = dir.path().join("rep.json");
    stdout(&discjet(&["rep-standard", "--n", "1", "--c", "2", "--out", arg(&rep)]));
    let bound: Value = serde_json::from_str(&stdout(&discjet(&["rep-bound", "--in", arg(&rep)]))).unwrap();
    assert_eq!(bound["weights"], serde_json::json!([-1, -2]));
    assert_eq!(bound["alpha0"], 2);
    let check: Value = serde_json::from_str(&stdout(&discjet(&["rep-check", "--in", arg(&rep)]))).unwrap();
    assert_eq!(check["ok"], true);
}

#[test]
fn malformed_input_exits_with_2() {
    let dir = TempDir::new().unwrap();
    let broken = write(&dir, "broken.json", "{");
    let unschema = write(&dir, "noschema.json", &T_PLUS_T2.replace(r#""schema":"discjet/1","#, ""));
    let future = write(&dir, "future.json", &T_PLUS_T2.replace("discjet/1", "discjet/2"));
    for p in [&broken, &unschema, &future] {
        let out = discjet(&["invert", "--in", arg(p)]);
        assert_eq!(out.status.code(), Some(2), "{}", p.display());
    }
    let g = write(&dir, "g.json", T_PLUS_T2);
    assert_eq!(discjet(&["invert", "--in", arg(&g), "--base", "[2]"]).status.code(), Some(2));
    assert_eq!(discjet(&["invert", "--bogus"]).status.code(), Some(2));
}

#[test]
fn violated_invariants_exit_with_3_and_name_them() {
    let dir = TempDir::new().unwrap();
    let singular = write(&dir, "z.json", &T_PLUS_T2.replace(r#"{"J":[1],"coef":"1"},"#, ""));
    let out = discjet(&["invert", "--in", arg(&singular)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("non-unit linear part"));

    let g = write(&dir, "g.json", T_PLUS_T2);
    let out = discjet(&["log", "--in", arg(&g)]);
    assert_eq!(out.status.code(), Some(0), "t + t^2 is unipotent");
    let out = discjet(&["classify", "--in", arg(&g), "--level", "9"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn corrupted_golden_is_a_named_failure() {
    let dir = TempDir::new().unwrap();
    let golden = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/golden/coproduct_n1_c4.json")).unwrap();
    let bad = write(&dir, "golden.json", &golden.replacen(r#""coef": "3""#, r#""coef": "4""#, 1));
    let out = discjet(&["selftest", "--only", "2", "--golden", arg(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("[FAIL]  2."), "{text}");
    assert!(text.contains("coproduct golden file mismatch at line"), "{text}");
}

#[test]
fn selftest_passes_and_is_reproducible() {
    let first = stdout(&discjet(&["selftest", "--seed", "7"]));
    assert!(first.ends_with("10/10 criteria passed\n"), "{first}");
    assert_eq!(first.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
    assert_eq!(stdout(&discjet(&["selftest", "--seed", "7"])), first);

    let other = stdout(&discjet(&["selftest", "--seed", "8"]));
    assert!(other.ends_with("10/10 criteria passed\n"), "{other}");
}
