use std::process::{Command, Output};

use alpha_futaki::Rational;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alpha-futaki")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn character_n2() {
    let out = run(&["character", "--n", "2", "--a", "11", "--b", "3"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["required_ratio"], "-1/8");
    assert_eq!(v["boundary"][0]["exact"], "1/3");
    assert_eq!(v["bulk"][1]["exact"], "4/3");
    assert_eq!(v["positive_alpha_verdict"], "ObstructedForPositiveAlpha");
}

#[test]
fn character_n3_flags_closed_form() {
    let v = json(&run(&["character", "--n", "3", "--a", "3", "--b", "2"]));
    assert_eq!(v["required_ratio"], "-49/18");
    assert_eq!(v["closed_form_checks"][0]["value"], "-49/66");
    assert_eq!(v["closed_form_checks"][0]["discrepant"], true);
}

#[test]
fn character_with_coupling() {
    let v = json(&run(&["character", "--n", "2", "--a", "11", "--b", "3", "--alpha0", "8", "--alpha1", "-1"]));
    assert_eq!(v["coupling"]["verdict"], "VanishesAtRatio");
    assert_eq!(v["coupling"]["character"][0]["exact"], "0");
    let v = json(&run(&["character", "--n", "2", "--a", "11", "--b", "3", "--alpha0", "1", "--alpha1", "1"]));
    assert_eq!(v["coupling"]["verdict"], "ObstructedForPositiveAlpha");
}

#[test]
fn unsolvable_exits_two() {
    let out = run(&["character", "--n", "2", "--a", "5/3", "--b", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("n(ab^(n-1)-1)/(b^n-1)"), "{err}");
    assert!(out.stdout.is_empty());

    let forced = run(&["--force", "character", "--n", "2", "--a", "5/3", "--b", "3"]);
    assert!(forced.status.success());
    assert_eq!(json(&forced)["hypothesis_violated"], true);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["character", "--n", "2", "--a", "2.5", "--b", "3"]).status.code(), Some(1));
    assert_eq!(run(&["character", "--n", "2"]).status.code(), Some(1));
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["character", "--n", "2", "--a", "1", "--b", "3"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn scan_grid() {
    let out = run(&["scan", "--n", "2", "--a-from", "2", "--a-to", "12", "--b-from", "2", "--b-to", "5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,a,b,solvable,F_boundary,F_bulk,ratio,verdict"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 44);
    let mut keys = Vec::new();
    for row in &rows {
        assert_eq!(row.len(), 8);
        let (a, b): (Rational, Rational) = (row[1].parse().unwrap(), row[2].parse().unwrap());
        keys.push((a.clone(), b.clone()));
        if row[3] != "true" {
            assert_eq!(row[7], "HypothesisViolated");
            continue;
        }
        if a == b {
            assert_eq!(row[6], "undefined");
            assert_eq!(row[7], "NoVanishingPossible");
        } else {
            let ratio: Rational = row[6].parse().unwrap();
            assert!(ratio.is_negative());
            let d = &b - &a;
            assert_eq!(ratio, -((&b * &b - Rational::one()) / (&d * &d)));
            assert_eq!(row[7], "ObstructedForPositiveAlpha");
            // Printed rationals parse back to the same value.
            assert_eq!(ratio.to_string(), row[6]);
        }
    }
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn scan_n3_ratios_negative() {
    let out =
        run(&["scan", "--n", "3", "--a-from", "2", "--a-to", "6", "--b-from", "3/2", "--b-to", "3", "--step", "1/2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut solvable = 0;
    for line in text.lines().skip(1) {
        let row: Vec<&str> = line.split(',').collect();
        if row[3] == "true" && row[6] != "undefined" {
            solvable += 1;
            assert!(row[6].parse::<Rational>().unwrap().is_negative(), "{line}");
        }
    }
    assert!(solvable > 5);
}

#[test]
fn scan_rejects_bad_ranges() {
    let zero =
        run(&["scan", "--n", "2", "--a-from", "2", "--a-to", "3", "--b-from", "2", "--b-to", "3", "--step", "0"]);
    assert_eq!(zero.status.code(), Some(1));
    let empty = run(&["scan", "--n", "2", "--a-from", "5", "--a-to", "3", "--b-from", "2", "--b-to", "3"]);
    assert_eq!(empty.status.code(), Some(1));
}

#[test]
fn verify_json_is_deterministic() {
    let first = run(&["verify", "--json"]);
    let second = run(&["verify-paper", "--json"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let v = json(&first);
    assert_eq!(v["report"]["failed"], 0);
    assert!(v["report"]["checks"].as_array().unwrap().len() > 50);
}

#[test]
fn verify_subset() {
    let out = run(&["verify", "--only", "n2-integrals", "--json"]);
    assert!(out.status.success());
    let v = json(&out);
    let checks = v["report"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 20);
    assert!(checks.iter().all(|c| c["group"] == "n2-integrals"));
    assert_eq!(run(&["verify", "--only", "bogus"]).status.code(), Some(1));
}

#[test]
fn kf_and_ample() {
    let v = json(&run(&["kf-check", "--k1", "7", "--k2", "-2"]));
    assert_eq!(v["keller_friedman"]["ratio"], "-1/32");
    assert_eq!(v["agrees"], true);
    let v = json(&run(&["ample-check", "--m1", "1", "--m2", "0"]));
    assert_eq!(v["checks"][0]["status"], "fail");
    let v = json(&run(&["ample-check", "--grid", "10"]));
    assert_eq!(v["infeasible"], true);
}

#[test]
fn integrate_modes() {
    assert_eq!(stdout(&run(&["integrate", "--n", "2", "--b", "3", "--expr", "1"])).trim(), "4");
    assert_eq!(stdout(&run(&["integrate", "--n", "2", "--b", "3", "--expr", "x1*X^-4"])).trim(), "1/3");
    assert_eq!(stdout(&run(&["integrate", "--n", "2", "--b", "3", "--expr", "X^-2"])).trim(), "1 log(3)");
    assert_eq!(stdout(&run(&["integrate", "--n", "2", "--b", "3", "--expr", "1", "--facet", "3"])).trim(), "3");
    assert_eq!(stdout(&run(&["integrate", "--n", "3", "--b", "2", "--expr", "x1", "--boundary"])).trim(), "23/6");
}

#[test]
fn polytope_from_file() {
    let dir = std::env::temp_dir().join(format!("alpha-futaki-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tri.json");
    std::fs::write(
        &path,
        r#"{"n":2,"halfspaces":[{"v":[1,0],"lam":"0"},{"v":[0,1],"lam":"0"},{"v":[-1,-2],"lam":"2"}]}"#,
    )
    .unwrap();
    let v = json(&run(&["polytope", "--file", path.to_str().unwrap()]));
    assert_eq!(v["volume"], "1");
    assert_eq!(v["delzant"], false);
    let v = json(&run(&["polytope", "--n", "3", "--b", "2"]));
    assert_eq!(v["volume"], "7/6");
    assert_eq!(v["delzant"], true);
    std::fs::remove_dir_all(dir).ok();
}
