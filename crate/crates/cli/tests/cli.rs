use std::process::{Command, Output};

fn apolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_apolar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = args.to_vec();
    full.push("--json");
    let out = apolar(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let v = if text.trim().is_empty() {
        serde_json::Value::Null
    } else {
        serde_json::from_str(text.trim()).unwrap()
    };
    (out.status.code().unwrap(), v)
}

#[test]
fn ann_linear_binomial() {
    let (code, v) = json(&["ann", "X1 - X2"]);
    assert_eq!(code, 0);
    assert_eq!(v["mu"], 2);
    assert_eq!(v["ci"], true);
    assert_eq!(v["generators"][0], "x1 + x2");
    assert_eq!(v["hilbert"], serde_json::json!([1, 1]));
}

#[test]
fn ann_not_ci() {
    let (code, v) = json(&["ann", "X1*X2 - X3*X4"]);
    assert_eq!(code, 0);
    assert_eq!(v["ci"], false);
    assert!(v["mu"].as_u64().unwrap() > 4);
    assert_eq!(v["hilbert"], serde_json::json!([1, 4, 1]));
}

#[test]
fn bad_input_exit_codes() {
    assert_eq!(apolar(&["ann", "0"]).status.code(), Some(2));
    assert_eq!(apolar(&["ann", "X1 +* X2"]).status.code(), Some(2));
    assert_eq!(apolar(&["classify", "X1*X2 - X1*X2"]).status.code(), Some(2));
    assert_eq!(apolar(&["classify", "X1 + X2 + X3"]).status.code(), Some(3));
    assert_eq!(apolar(&["verify", "X1 + X2 + X3"]).status.code(), Some(3));
    assert_eq!(apolar(&["hilbert", "X1^2 - X2"]).status.code(), Some(2));
    assert_eq!(apolar(&["ann", "X1", "--field", "p:4"]).status.code(), Some(2));
}

#[test]
fn classify_case_b() {
    let (code, v) = json(&["classify", "X1*X2*X3^3*X1*X2 - X1*X2*X3^5"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "CI_case_b");
    assert_eq!(
        v["generators"],
        serde_json::json!(["x1^3", "x2^3", "x1^2*x2^2 + x1*x2*x3^2 + x3^4"])
    );
}

#[test]
fn classify_outside_theorem_falls_back() {
    let (code, v) = json(&["classify", "X1^2*X2 - X2"]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "OutsideTheorem_d2_zero");
    assert_eq!(v["generator_source"], "oracle");
    assert!(v["fallback"].is_string());
}

#[test]
fn verify_examples() {
    let (code, v) = json(&["verify", "X1 - X2", "--slp"]);
    assert_eq!(code, 0);
    assert_eq!(v["agreement"], true);
    assert_eq!(v["ideal_equality"], "Equal");
    assert_eq!(v["slp"]["status"], "witness");

    let (code, v) = json(&["verify", "X1*X2 - X3*X4"]);
    assert_eq!(code, 0);
    assert_eq!((v["agreement"].clone(), v["ci"].clone()), (true.into(), false.into()));

    let (code, v) = json(&["verify", "X2^2*X1 - X2^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["normal_form"]["case"], "2a");
    assert_eq!(v["ideal_equality"], "Equal");

    let (code, v) = json(&["verify", "-3/2X1^2 + 2X2^2", "--field", "p:7"]);
    assert_eq!(code, 0);
    assert_eq!(v["field"], "p:7");
    assert_eq!(v["normal_form"]["c1"], "2");
}

#[test]
fn slp_characteristic_gate() {
    let out = apolar(&["slp", "X1*X2", "--field", "p:2"]);
    assert_eq!(out.status.code(), Some(2));
    let (code, v) = json(&["slp", "X1*X2", "--field", "p:2", "--slp-override", "--trials", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "none_found");
    assert!(v["note"].as_str().unwrap().starts_with("NO_WITNESS_FOUND"));
    let (_, v) = json(&["slp", "X1*X2"]);
    assert_eq!(v["witness"], "x1 + x2");
    assert_eq!(v["trials_used"], 1);
}

#[test]
fn text_output_mentions_the_essentials() {
    let out = apolar(&["verify", "X1 - X2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classifier: CI_case_a"), "{text}");
    assert!(text.contains("ideal equality: Equal"), "{text}");
}

#[test]
fn nvars_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ann.json");
    let p = path.to_str().unwrap();
    let out = apolar(&["ann", "X1", "--nvars", "2", "--json", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["n_vars"], 2);
    assert_eq!(v["generators"], serde_json::json!(["x2", "x1^2"]));

    let bad = dir.path().join("missing").join("x.json");
    let out = apolar(&["ann", "X1", "--out", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn corpus_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let out = apolar(&[
            "corpus",
            "--count",
            "30",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(summary["disagreements"], 0);
        std::fs::read(path).unwrap()
    };
    let a = run("a.jsonl");
    let b = run("b.jsonl");
    assert_eq!(a, b);
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 30);
}

#[test]
fn homogeneous_corpus_terms_have_equal_degree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.jsonl");
    let summary = dir.path().join("s.json");
    let out = apolar(&[
        "corpus",
        "--count",
        "20",
        "--homogeneous",
        "--slp",
        "--out",
        path.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert_eq!(s["slp_failures"], 0);
    for line in std::fs::read_to_string(path).unwrap().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let nf = &v["normal_form"];
        let deg = |k: &str| {
            nf[k]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.as_u64().unwrap())
                .sum::<u64>()
        };
        assert_eq!(deg("b_left"), deg("b_right"), "{line}");
    }
}
