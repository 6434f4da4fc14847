use std::process::{Command, Output};

use serde_json::{json, Value};

const EXE: &str = env!("CARGO_BIN_EXE_cohen-lab");

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(EXE).args(args).env_remove("COHEN_LAB_BUDGET").output().unwrap();
    parsed(out)
}

fn parsed(out: Output) -> (i32, Value) {
    let text = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"));
    (out.status.code().unwrap(), v)
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cohen-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn codec_decode_example() {
    assert_eq!(run(&["codec", "decode", "--in", "00111"]), (0, json!({"blocks": ["0", "1"]})));
    assert_eq!(run(&["codec", "decode", "--in", "\"001\""]), (0, json!({"blocks": ["0"]})));
}

#[test]
fn codec_output_feeds_back_in() {
    let (code, v) = run(&["codec", "encode", "--in", r#"["01", "1", "110"]"#]);
    assert_eq!(code, 0);
    let coded = v["coded"].as_str().unwrap().to_string();
    let (_, back) = run(&["codec", "decode", "--in", &coded]);
    assert_eq!(back, json!({"blocks": ["01", "1", "110"]}));

    let (_, v) = run(&["codec", "encode-lambda", "--in", r#"{"slices": [{"0": "1"}, {"1": "0"}]}"#]);
    let coded = v["coded"].to_string();
    let (_, back) = run(&["codec", "decode-lambda", "--in", &coded]);
    assert_eq!(back, json!({"slices": [{"0": "1"}, {"1": "0"}]}));
}

#[test]
fn verify_identity_split_example() {
    let (code, v) = run(&["verify", "--projection", "identity-split", "--bound", "9"]);
    assert_eq!(code, 0);
    assert_eq!(v["violations"], json!([]));
    assert_eq!(v["domain_checked"], json!(342));
}

#[test]
fn verify_term_maps_on_a_given_poset() {
    let poset = r#"{"size": 3, "leq_pairs": [[1, 0], [2, 0]], "top": 0}"#;
    for name in ["term-to-cohen", "cohen-to-term"] {
        let (code, v) = run(&["verify", "--projection", name, "--in", poset]);
        assert_eq!((code, &v["violations"], &v["posets"]), (0, &json!([]), &json!(1)), "{name}");
    }
}

#[test]
fn approx_triangle_from_file() {
    let path = scratch("pair.json");
    std::fs::write(
        &path,
        r#"{"universe": 3, "delta": 2,
            "W": [[], [0], [1], [2], [0, 1], [0, 2], [1, 2]],
            "V": [[], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2]]}"#,
    )
    .unwrap();
    let (code, v) = run(&["approx", "--file", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v, json!({"verdict": "counterexample", "witness": [0, 1, 2]}));
    let (code, v) = run(&["approx", "--in", r#"{"universe": 2, "delta": 1, "W": [[]], "V": [[]]}"#]);
    assert_eq!((code, v), (0, json!({"verdict": "holds"})));
}

#[test]
fn input_errors_exit_2_with_a_diagnostic() {
    for args in [
        vec!["codec", "decode", "--in", "0101"],
        vec!["codec", "decode", "--in", "01x"],
        vec!["codec", "decode"],
        vec!["approx", "--in", r#"{"universe": 2, "delta": 1, "W": [[5]], "V": [[5]]}"#],
        vec!["verify", "--projection", "nonsense-split"],
        vec!["demo", "nope"],
        vec!["term", "equiv", "--in", r#"{"a": [1, 2], "b": [0, 1]}"#],
        vec!["codec", "decode", "--in", "1", "--file", "/nonexistent"],
        vec!["no-such-subcommand"],
    ] {
        let (code, v) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(v["error"]["kind"].is_string() && v["error"]["message"].is_string(), "{args:?}: {v}");
    }
}

#[test]
fn lift_below_a_non_extension_is_refused() {
    let (code, v) = run(&["lift", "--map", "one", "--in", r#"{"p": "001", "q": "1"}"#]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], json!("not_below"));
}

#[test]
fn lift_examples() {
    let (_, v) = run(&["lift", "--map", "one", "--dict", "swap01", "--in", r#"{"p": "1", "q": "0"}"#]);
    assert_eq!(v["lifted"], json!("111"));
    let (_, v) = run(&["lift", "--map", "term-to-cohen", "--in", r#"{"p": [], "q": "10"}"#]);
    assert_eq!(v["lifted"], json!([[0], []]));
    let (_, v) = run(&["project", "--map", "cohen-to-term", "--in", r#"{"p": "011111"}"#]);
    assert_eq!(v["image"], json!([[1, 2], []]));
}

#[test]
fn budget_comes_from_the_environment() {
    let out = Command::new(EXE)
        .args(["verify", "--projection", "identity-split", "--bound", "9"])
        .env("COHEN_LAB_BUDGET", "10")
        .output()
        .unwrap();
    let (code, v) = parsed(out);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], json!("bound_exceeded"));
}

#[test]
fn out_flag_writes_the_document() {
    let path = scratch("out.json");
    let out = Command::new(EXE)
        .args(["codec", "densify", "--in", "1", "--out", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v, json!({"coded": "101"}));
}

#[test]
fn help_and_version_exit_0() {
    for flag in ["--help", "--version"] {
        let out = Command::new(EXE).arg(flag).output().unwrap();
        assert!(out.status.success(), "{flag}");
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn seeded_commands_are_reproducible() {
    for args in [
        vec!["generic", "--seed", "5"],
        vec!["assemble", "--seed", "5", "--stages", "2", "--dense", "4"],
        vec!["demo", "transfer", "--seed", "3"],
    ] {
        let a = Command::new(EXE).args(&args).output().unwrap();
        let b = Command::new(EXE).args(&args).output().unwrap();
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let (_, a) = run(&["generic", "--seed", "5"]);
    let (_, b) = run(&["generic", "--seed", "6"]);
    assert_ne!(a["dense"], b["dense"]);
}

#[test]
fn assemble_rejects_a_family_that_cannot_be_met() {
    // a truncation of 2 leaves no room to meet a length-4 requirement
    let pipeline = r#"{"stages": [{"lambda": 1, "max_len": 2, "rule": "identity",
        "dense": [{"kind": "min_len", "coord": 0, "k": 4}]}]}"#;
    let (code, v) = run(&["assemble", "--in", pipeline]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], json!("not_dense"));
    let pipeline = r#"{"stages": [{"lambda": 1, "max_len": 20, "rule": "bitflip",
        "dense": [{"kind": "min_len", "coord": 0, "k": 3}]}]}"#;
    let (code, v) = run(&["assemble", "--in", pipeline]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["trace"][0]["dense_met"], json!(1));
}

#[test]
fn term_subcommands() {
    let ab = r#"{"size": 3, "leq_pairs": [[1, 0], [2, 0]], "top": 0}"#;
    let input = |rest: &str| format!(r#"{{"poset": {ab}, {rest}}}"#);
    assert_eq!(run(&["term", "equiv", "--in", &input(r#""a": [0], "b": [1, 2]"#)]).1, json!({"equiv": true}));
    assert_eq!(run(&["term", "leq", "--in", &input(r#""p": [[0], [1]], "q": [[1, 2]]"#)]).1, json!({"leq": true}));
    assert_eq!(run(&["term", "to-cohen", "--in", &input(r#""p": [[0], [1]]"#)]).1, json!({"image": "10"}));
    assert_eq!(
        run(&["term", "eval", "--in", &input(r#""q": [[1], [1, 2]], "atom": 2"#)]).1,
        json!({"value": "01"})
    );
    assert_eq!(run(&["term", "catalog", "--bound", "3"]).1["count"], json!(12));
}
