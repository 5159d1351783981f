use fanih::cli::run;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn temp(name: &str, body: &str) -> String {
    let p = std::env::temp_dir().join(format!("fanih-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn success_prints_json() {
    let (code, out, _) = run(["fanih", "ih", &fixture("polygon-5-fan.json")]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["ih"], serde_json::json!([1, 3, 1]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(["fanih", "ih", "/nonexistent.json"]).0, 2);
    assert_eq!(run(["fanih", "bogus"]).0, 2);
    let bad = temp("bad.json", r#"{"field":"Q","dim":2,"rays":[["1","0"]],"cones":[[0,7]]}"#);
    assert_eq!(run(["fanih", "ih", &bad]).0, 2);
    let zero = temp(
        "zero.json",
        r#"{"field":"Q","dim":1,"rays":[["1"],["-1"]],"cones":[[0],[1]],"functions":{"z":[["0"],["0"]]}}"#,
    );
    let (code, _, err) = run(["fanih", "check-hl", &zero, "--lefschetz", "z"]);
    assert_eq!(code, 3, "{err}");
    let (code, _, _) = run(["fanih", "check-hl", &fixture("square-fan.json"), "--lefschetz", "missing"]);
    assert_eq!(code, 2);
}
