use std::path::PathBuf;
use std::process::{Command, Output};

fn ppcalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppcalc")).args(args).output().expect("run ppcalc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn eval_divisibility_on_z2() {
    let o = ppcalc(&["eval", "--ring", "z4", "--module", "z2", "--formula", "E y . x + y*2 = 0"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("subgroup {0}"), "{s}");
    assert!(s.contains("order 1"), "{s}");
}

#[test]
fn demo_table() {
    for cmd in [&["demo-4-3", "--field", "f2"][..], &["pairs", "demo-4-3", "--field", "f2"][..]] {
        let o = ppcalc(cmd);
        assert!(o.status.success());
        let orders: Vec<String> = stdout(&o)
            .lines()
            .filter_map(|l| l.split("order").nth(1))
            .filter_map(|rest| rest.split_whitespace().next().map(str::to_string))
            .collect();
        assert_eq!(orders, ["8", "4", "2", "4", "2"]);
    }
}

#[test]
fn broken_ringoid_is_rejected_with_the_axiom() {
    let path = scratch("broken_ringoid.json");
    std::fs::write(
        &path,
        r#"{"name": "bad", "objects": ["R"], "homs": [{"dom": "R", "cod": "R", "orders": [4]}],
            "compose": [{"dom": "R", "mid": "R", "cod": "R", "outer": 0, "inner": 0, "value": [1]}],
            "identities": {"R": [2]}}"#,
    )
    .unwrap();
    let o = ppcalc(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("identity axiom"), "{err}");
}

#[test]
fn valid_module_document() {
    let path = scratch("module.json");
    std::fs::write(&path, r#"{"ringoid": "f2e", "presentation": "[x1, x2] x2*e = 0"}"#).unwrap();
    let o = ppcalc(&["validate", path.to_str().unwrap()]);
    assert!(o.status.success());
    let o = ppcalc(&["eval", "--ring", "f2e", "--module", path.to_str().unwrap(), "--formula", "x*e = 0"]);
    assert!(stdout(&o).contains("order 4"), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_2_with_location() {
    let o = ppcalc(&["eval", "--ring", "z4", "--module", "z2", "--formula", "x = "]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:5"));
    let o = ppcalc(&["eval", "--ring", "nope", "--module", "z2", "--formula", "x = 0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn expect_flag() {
    let yes = ["implies", "--ring", "z4", "E y . x = y*2", "x*2 = 0"];
    assert_eq!(ppcalc(&[&yes[..], &["--expect", "yes"]].concat()).status.code(), Some(0));
    assert_eq!(ppcalc(&[&yes[..], &["--expect", "no"]].concat()).status.code(), Some(1));
    // Negative decisions without --expect still succeed.
    assert!(ppcalc(&["vnr", "--ring", "z4"]).status.success());
    assert_eq!(ppcalc(&["vnr", "--ring", "z4", "--expect", "yes"]).status.code(), Some(1));
    assert_eq!(ppcalc(&["vnr", "--ring", "z6", "--expect", "yes"]).status.code(), Some(0));
    // Commands without a yes/no answer reject the flag.
    assert_eq!(ppcalc(&["dual", "--ring", "z4", "--formula", "x = 0", "--expect", "yes"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let (a, b) = (scratch("report_a.json"), scratch("report_b.json"));
    for p in [&a, &b] {
        let o = ppcalc(&["qe", "--ring", "z4", "--formula", "E y . x = y*2", "--json-out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["version"], 1);
    assert_eq!(v["command"], "qe");
    assert_eq!(v["decision"]["outcome"], "provably-none");
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 3);
    assert!(v.get("timings").is_none());
}

fn dual_of(side: &str, src: &str) -> String {
    let path = scratch(&format!("dual_{side}.json"));
    let o = ppcalc(&["dual", "--ring", "a2f2", "--side", side, "--formula", src, "--json-out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    v["decision"]["dual"].as_str().unwrap().to_string()
}

#[test]
fn dual_round_trips_through_the_printer() {
    let d = dual_of("right", "E y . x = y*r");
    let dd = dual_of("left", &d);
    let o = ppcalc(&["equiv", "--ring", "a2f2", "E y . x = y*r", &dd, "--expect", "yes"]);
    assert!(o.status.success(), "{}", stdout(&o));
}

#[test]
fn purity_and_modules() {
    let o = ppcalc(&["pure", "--ring", "z4", "--module", "regular", "--sub", "2", "--expect", "no"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("witness: E y . x + y*2 = 0"));
    assert!(ppcalc(&["pure", "--ring", "z4", "--module", "regular", "--sub", "2", "--epi", "--expect", "no"]).status.success());
    assert!(ppcalc(&["flat", "--ring", "z4", "--module", "z2", "--expect", "no"]).status.success());
    assert!(ppcalc(&["abspure", "--ring", "z4", "--module", "regular", "--expect", "yes"]).status.success());
    assert!(ppcalc(&["herzog", "--ring", "z4", "--module", "regular", "--left-module", "z2", "--r", "2", "--s", "1", "--expect", "yes"])
        .status
        .success());
}

#[test]
fn pair_operations() {
    let o = ppcalc(&["pairs", "value", "--ring", "f2e", "--top", "x = x", "--bottom", "E y . x = y*e", "--module", "r-plus-s1"]);
    assert!(stdout(&o).contains("order 4"));
    let o = ppcalc(&["pairs", "morphism-check", "--ring", "f2e", "--top", "x = x", "--top2", "x*e = 0", "--rho", "[x, y] x = y", "--expect", "no"]);
    assert!(stdout(&o).contains("condition 1"));
    assert!(o.status.success());
    let o = ppcalc(&["pairs", "serre", "--ring", "f2e", "--top", "x*e = 0", "--bottom", "E y . x = y*e", "--expect", "yes"]);
    assert!(o.status.success());
    let o = ppcalc(&["pairs", "loc-iso", "--ring", "f2e", "--top", "x*e = 0", "--top2", "E y . x = y*e", "--expect", "yes"]);
    assert!(o.status.success());
    let o = ppcalc(&["pairs", "kernel", "--ring", "f2e", "--top", "x = x", "--top2", "x = x", "--rho", "[x, y] x*e = y"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn embed_and_harness() {
    let o = ppcalc(&["embed", "--ring", "z6", "--top", "E y . x = y*2", "--expect", "yes"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = ppcalc(&["vnr-harness", "--ring", "z6", "--expect", "yes"]);
    assert!(stdout(&o).contains("34 of 34"), "{}", stdout(&o));
}

#[test]
fn suite_subset() {
    let o = ppcalc(&["suite", "--criterion", "1,2"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("criterion 1: PASS") && s.contains("criterion 2: PASS") && s.contains("suite: PASS"), "{s}");
}
