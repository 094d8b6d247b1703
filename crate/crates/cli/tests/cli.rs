use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn wormhole(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wormhole")).args(args).env_remove("WORMHOLE_OUT_DIR").output().expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = wormhole(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_of(args: &[&str]) -> (i32, Value) {
    let out = wormhole(args);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "error is one line: {stderr}");
    (out.status.code().unwrap(), serde_json::from_str(&stderr).expect("error is JSON"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wormhole-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn hj_commands() {
    assert_eq!(wormhole(&["hj", "eval", "2,1,2"]).stdout, b"{\"value\":\"0/1\"}\n");
    let v = json_ok(&["hj", "expand", "31901/10000"]);
    assert_eq!(v["chain"], serde_json::json!([4, 2, 2, 2, 2, 5, 7, 2, 2, 3, 2, 2, 6]));
    let v = json_ok(&["hj", "dual", "[4,2,2,2,2,5,7,2,2,3,2,2,6]"]);
    assert_eq!(v["dual"], serde_json::json!([2, 2, 7, 2, 2, 3, 2, 2, 2, 2, 5, 5, 2, 2, 2, 2]));
}

#[test]
fn wchain_both_directions() {
    let built = json_ok(&["wchain", "--word", "LR"]);
    let chain = built["chain"].as_array().unwrap().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
    let seen = json_ok(&["wchain", &chain]);
    assert_eq!((seen["w_chain"].as_bool(), &seen["n"], &seen["a"]), (Some(true), &built["n"], &built["a"]));
    assert_eq!(json_ok(&["wchain", "3,3"])["w_chain"], false);
}

#[test]
fn pres_and_decomp() {
    let v = json_ok(&["pres", "31901", "10000"]);
    assert_eq!((v["count"].as_u64(), v["ww_index"].as_u64(), v["basic"].as_bool()), (Some(2), Some(3), Some(true)));
    let v = json_ok(&["decomp", "3,2,2,3"]);
    assert_eq!(v["label"], serde_json::json!({ "m": "16", "q": "9" }));
    assert_eq!(v["count"], 2);
}

#[test]
fn reduce_pinned_case() {
    let v = json_ok(&["reduce", "3,2,2,3"]);
    assert_eq!(v["outcome"], "degenerate");
}

#[test]
fn classify_three_weights() {
    let v = json_ok(&["classify", "--weights", "3"]);
    let shapes: Vec<Value> = v["families"].as_array().unwrap().iter().map(|f| f["weights"].clone()).collect();
    assert_eq!(shapes, [serde_json::json!(["t", "t-2", "t"]), serde_json::json!(["t", "t", "t-2"])]);
    let mins: Vec<Value> = v["families"].as_array().unwrap().iter().map(|f| f["family"]["param_min"].clone()).collect();
    assert_eq!(mins, [serde_json::json!([5]), serde_json::json!([5])]);
    let v = json_ok(&["classify", "--weights", "4"]);
    assert_eq!(v["inconsistent_m"], serde_json::json!([2]));
}

#[test]
fn classify_instantiate_recovers_label() {
    let v = json_ok(&["classify", "--weights", "5", "--instantiate", "7"]);
    let fam = v["families"].as_array().unwrap().iter().find(|f| f["m"] == 3).unwrap();
    assert_eq!(fam["singularity"]["label"], serde_json::json!({ "m": "31901", "q": "10000" }));
    // below the family minimum the entry carries an error instead
    let v = json_ok(&["classify", "--weights", "5", "--instantiate", "4"]);
    assert!(v["families"].as_array().unwrap().iter().any(|f| f.get("error").is_some()));
}

#[test]
fn scan_jobs_are_byte_identical() {
    let one = wormhole(&["scan", "--max-m", "150"]);
    let four = wormhole(&["scan", "--max-m", "150", "--jobs", "4"]);
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    let first = String::from_utf8(one.stdout).unwrap().lines().next().unwrap().to_string();
    assert_eq!(first, r#"{"m":2,"q":1,"count":0,"ww_index":null,"basic":false}"#);
}

#[test]
fn scan_out_uses_env_dir() {
    let dir = scratch("scan");
    let out = Command::new(env!("CARGO_BIN_EXE_wormhole"))
        .args(["scan", "--max-m", "20", "--out", "sub/scan.jsonl"])
        .env("WORMHOLE_OUT_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = std::fs::read_to_string(dir.join("sub/scan.jsonl")).unwrap();
    assert_eq!(summary["records"].as_u64().unwrap() as usize, text.lines().count());
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_small_range() {
    let v = json_ok(&["verify", "--max-m", "120"]);
    assert_eq!(v["max_count"], 2);
    assert_eq!(v["violations"], serde_json::json!([]));
}

#[test]
fn render_outputs() {
    let svg = wormhole(&["render", "--chain", "1,2,3,2,2,5,3,1,2,3,2,2,5|3", "--format", "svg"]);
    assert!(svg.status.success());
    let text = String::from_utf8(svg.stdout).unwrap();
    assert!(text.starts_with("<?xml") && text.ends_with("</svg>\n"));
    let again = wormhole(&["render", "--chain", "1,2,3,2,2,5,3,1,2,3,2,2,5|3", "--format", "svg"]);
    assert_eq!(text.as_bytes(), again.stdout.as_slice());
    let ascii = wormhole(&["render", "--chain", "1,2,2,1|3", "--format", "ascii"]);
    assert!(String::from_utf8(ascii.stdout).unwrap().starts_with("[1,2,2,1|3]  p=5\n"));
    let graph = wormhole(&["render", "--chain", "1,2,3,2,2,5,3,1,2,3,2,2,5|3", "--format", "ascii", "--graph"]);
    assert_eq!(String::from_utf8(graph.stdout).unwrap().matches("-y").count(), 6);

    let dir = scratch("render");
    let path = dir.join("p.svg");
    let out = wormhole(&["render", "--chain", "1,2,2,1|3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(std::fs::read_to_string(&path).unwrap().contains("</svg>"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bad_input_exits_one() {
    for (args, kind) in [
        (vec!["hj", "eval", "2,x"], "parse"),
        (vec!["hj", "eval", "1,1,1"], "invalid_chain"),
        (vec!["pres", "10", "4"], "invalid_label"),
        (vec!["pres", "ten", "3"], "parse"),
        (vec!["render", "--chain", "2,2,2|1"], "not_a_zero_chain"),
        (vec!["render", "--chain", "1,2,1|2", "--format", "png"], "parse"),
        (vec!["scan", "--max-m", "1"], "out_of_range"),
        (vec!["reduce", "2,2,2"], "precondition"),
        (vec!["frobnicate"], "usage"),
    ] {
        let (code, err) = error_of(&args);
        assert_eq!(code, 1, "{args:?}");
        assert_eq!(err["error"]["kind"], kind, "{args:?}: {err}");
    }
}
