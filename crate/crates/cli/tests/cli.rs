use gr38_core::driver::ConeRecord;
use gr38_core::known;
use gr38_core::matroid::Permutation;
use gr38_core::verify::{a_t, plucker_valuations};
use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, Output};

fn gr38(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gr38"))
        .args(args)
        .env_remove("GR38_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn write_records(path: &Path, records: &[ConeRecord]) {
    let lines: Vec<String> = records.iter().map(|r| serde_json::to_string(r).unwrap()).collect();
    std::fs::write(path, lines.join("\n") + "\n").unwrap();
}

fn worked_examples() -> Vec<ConeRecord> {
    let sigma = Permutation::new(vec![2, 0, 1, 4, 3, 7, 5, 6]).unwrap();
    [
        ("special", known::w_sp()),
        ("tree", known::tree_example()),
        ("mantis", known::mantis_example().permuted(&sigma)),
        ("six-fin", known::six_fin_example()),
        ("a_t", plucker_valuations(&a_t()).unwrap()),
    ]
    .into_iter()
    .map(|(id, w)| ConeRecord {
        id: id.into(),
        rays: vec![w],
    })
    .collect()
}

fn certificate_names(dir: &Path) -> BTreeSet<(String, String)> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap() != "summary.json")
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

#[test]
fn qsp_check_passes() {
    let o = gr38(&["qsp-check"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn classify_examples() {
    for (ex, label) in [("special", "G2 special"), ("tree", "G2"), ("mantis", "G5"), ("six-fin", "G6/H0")] {
        let o = gr38(&["classify", "--example", ex]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), label);
    }
}

#[test]
fn verify_then_audit() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = gr38(&["verify", "--example", "mantis", "--out", out, "--strict"]);
    assert!(o.status.success());
    let cert = json(&o);
    assert_eq!(cert["verified"], true);
    assert_eq!(cert["dimension"], 15);
    let o = gr38(&["audit", out]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("1 elimination(s) replayed"));

    let (name, text) = certificate_names(dir.path()).into_iter().next().unwrap();
    let mut c: serde_json::Value = serde_json::from_str(&text).unwrap();
    c["dimension"] = 16.into();
    let bad = dir.path().join(format!("tampered-{name}"));
    std::fs::write(&bad, c.to_string()).unwrap();
    let o = gr38(&["audit", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn weight_from_file_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(&w, serde_json::to_string(&known::tree_example()).unwrap()).unwrap();
    let o = gr38(&["tightspan", w.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["vertices"].as_array().unwrap().len(), 6);
    let o = gr38(&["subdivide", w.to_str().unwrap()]);
    assert_eq!(json(&o)["maximal_cells"].as_array().unwrap().len(), 6);

    std::fs::write(&w, "{\"n\": 8, \"r\": 3, \"entries\": [{\"basis\": [1, 2], \"value\": 1}]}").unwrap();
    assert_eq!(gr38(&["verify", w.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn batch_of_worked_examples() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cones.jsonl");
    let out = dir.path().join("certs");
    write_records(&input, &worked_examples());
    let o = gr38(&["batch", input.to_str().unwrap(), "--orbits", "--out", out.to_str().unwrap(), "--jobs", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json(&o);
    assert_eq!(s["processed"], 5);
    assert_eq!(s["counts"]["G2"], 3);
    assert_eq!(s["counts"]["G5"], 1);
    assert_eq!(s["h_counts"]["H0"], 1);
    assert_eq!(s["two_components"], serde_json::json!(["special", "a_t"]));
    for rec in s["outcomes"].as_array().unwrap() {
        assert_eq!(rec["dimension"], 15);
        assert_eq!(rec["verified"], true);
    }
    // the special weight and A_t land in one file
    let first = certificate_names(&out);
    assert_eq!(first.len(), 4);

    // resumed and reordered runs give the same files
    let mut reordered = worked_examples();
    reordered.reverse();
    write_records(&input, &reordered);
    let o = gr38(&["batch", input.to_str().unwrap(), "--all-cones", "--out", out.to_str().unwrap()]);
    let s = json(&o);
    assert_eq!(s["processed"], 4);
    assert!(s["outcomes"].as_array().unwrap().iter().all(|r| r["reused"] == true));
    assert_eq!(certificate_names(&out), first);

    let fresh = dir.path().join("fresh");
    let o = gr38(&["batch", input.to_str().unwrap(), "--all-cones", "--out", fresh.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(certificate_names(&fresh), first);
}

#[test]
fn batch_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.jsonl");
    std::fs::write(&input, "").unwrap();
    let o = gr38(&["batch", input.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(json(&o)["processed"], 0);

    std::fs::write(&input, "{\"id\": 1, \"rays\": []}\n{broken\n").unwrap();
    let o = gr38(&["batch", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    std::fs::write(&input, "{\"id\": 1, \"rays\": []}\n").unwrap();
    let o = gr38(&["batch", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["failures"][0]["line"], 1);
}

#[test]
fn jobs_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("one.jsonl");
    write_records(&input, &worked_examples()[1..2]);
    let o = Command::new(env!("CARGO_BIN_EXE_gr38"))
        .args(["batch", input.to_str().unwrap()])
        .env("GR38_JOBS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_gr38"))
        .args(["batch", input.to_str().unwrap()])
        .env("GR38_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
