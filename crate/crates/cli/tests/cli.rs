use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use wdtab::formula::parse;
use wdtab::kripke::{certify, KripkeModel};
use wdtab::saturation::LogicId;

fn wdtab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wdtab")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn unsat_example() {
    let v = json(&wdtab(&["sat", "--logic", "kde", "<a>p & [a][b]~p"]));
    assert_eq!(v["result"], "unsat");
    assert!(v.get("model").is_none());
    assert!(v["stats"]["nodes_visited"].as_u64().unwrap() >= 1);
}

#[test]
fn weak_density_is_valid() {
    let v = json(&wdtab(&["valid", "--logic", "kde", "[a][b]p -> [a]p"]));
    assert_eq!(v["result"], "valid");
    let v = json(&wdtab(&["valid", "--de", "--4a", "--4b", "[a][b]p -> [a]p"]));
    assert_eq!(v["result"], "valid");
}

#[test]
fn sat_embeds_a_certified_model() {
    let f = "~([a][b]p -> [a]p)";
    let v = json(&wdtab(&["sat", "--logic", "kab", f, "--json"]));
    assert_eq!(v["result"], "sat");
    let m: KripkeModel = serde_json::from_value(v["model"].clone()).unwrap();
    assert!(certify(&m, &parse(f).unwrap(), LogicId::K));
}

#[test]
fn invalid_formula_gets_countermodel() {
    let v = json(&wdtab(&["valid", "--logic", "kab4a4b", "[a][b]p -> [a]p"]));
    assert_eq!(v["result"], "invalid");
    let m: KripkeModel = serde_json::from_value(v["countermodel"].clone()).unwrap();
    assert!(certify(&m, &parse("~([a][b]p -> [a]p)").unwrap(), LogicId::K4A4B));
}

#[test]
fn model_command_prints_bare_model() {
    let out = wdtab(&["model", "--logic", "kde4a", "<a>p & [a]<a>q"]);
    let m: KripkeModel = serde_json::from_slice(&out.stdout).unwrap();
    assert!(certify(&m, &parse("<a>p & [a]<a>q").unwrap(), LogicId::KDE4A));
    let v = json(&wdtab(&["model", "p & ~p"]));
    assert_eq!(v["result"], "unsat");
}

#[test]
fn reads_stdin_and_files() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_wdtab"))
        .args(["sat", "--logic", "kab4a"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"<a><a>p & [a]~p\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json(&out)["result"], "unsat");

    let dir = std::env::temp_dir().join(format!("wdtab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("f.txt");
    std::fs::write(&path, "<a><a>p & [a]~p").unwrap();
    let v = json(&wdtab(&["sat", "--file", path.to_str().unwrap()]));
    assert_eq!(v["result"], "sat");
}

#[test]
fn exit_codes() {
    let out = wdtab(&["sat", "p & ("]);
    assert_eq!(out.status.code(), Some(2));
    let out = wdtab(&["sat", "--budget-nodes", "1", "<a>p & <b>q"]);
    assert_eq!(out.status.code(), Some(3));
    let out = wdtab(&["sat", "--4b", "p"]);
    assert_eq!(out.status.code(), Some(1));
    let out = wdtab(&["sat", "--logic", "kde", "--de", "p"]);
    assert!(!out.status.success());
}

#[test]
fn text_and_json_agree() {
    for f in ["<a>p & [a][b]~p", "<a>p", "[a]p & <a>~p", "<b>p & [a]<b>~p"] {
        for logic in ["kab", "kab4a", "kab4a4b", "kde", "kde4a", "kde4a4b"] {
            let v = json(&wdtab(&["sat", "--logic", logic, f]));
            let t = wdtab(&["sat", "--logic", logic, f, "--text"]);
            let first = String::from_utf8(t.stdout).unwrap();
            assert_eq!(first.lines().next().unwrap(), v["result"].as_str().unwrap(), "{f} in {logic}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["sat", "--logic", "kde4a4b", "<a>p & [a]<b>q & <b><a>~p"];
    assert_eq!(wdtab(&args).stdout, wdtab(&args).stdout);
}

#[test]
fn fuel_mode_matches_loop_detection() {
    for f in ["<a>p", "<a>(p & <b>~p) & [a](p | [b]p)", "<a>p & [a][b]~p"] {
        let a = json(&wdtab(&["sat", "--logic", "kde", f]));
        let b = json(&wdtab(&["sat", "--logic", "kde", "--fuel", "32", f]));
        assert_eq!(a["result"], b["result"], "{f}");
    }
}

#[test]
fn bench_keeps_input_order() {
    let dir = std::env::temp_dir().join(format!("wdtab-bench-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bench.txt");
    std::fs::write(&path, "# sample\np & ~p\n<a>p   # needs a successor\n\n[a]p & <a>~p\n<a><a>p\n").unwrap();
    let v = json(&wdtab(&["bench", path.to_str().unwrap(), "--logic", "kde4a"]));
    let results = v["results"].as_array().unwrap();
    let lines: Vec<u64> = results.iter().map(|r| r["line"].as_u64().unwrap()).collect();
    assert_eq!(lines, vec![2, 3, 5, 6]);
    let verdicts: Vec<&str> = results.iter().map(|r| r["verdict"]["result"].as_str().unwrap()).collect();
    assert_eq!(verdicts, vec!["unsat", "sat", "unsat", "sat"]);
    assert_eq!(v["aggregate"]["within_depth_bound"], true);

    std::fs::write(&path, "p\n(p\n").unwrap();
    assert_eq!(wdtab(&["bench", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn quick_selftest_passes() {
    let out = wdtab(&["selftest", "--corpus-size", "4", "--random", "20", "--instances", "300", "--triples", "50"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.lines().filter(|l| l.starts_with("[PASS]")).count() >= 10, "{text}");
}
