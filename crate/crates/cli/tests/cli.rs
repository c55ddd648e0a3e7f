use std::process::{Command, Output};

use serde_json::Value;

const O2: &str = "0/1,2/1,-2/1,2/1";

fn decagon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_decagon"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = decagon(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn periods_csv_has_unit_vector_periods() {
    let o = decagon(&["periods", "--limit", "100", "--emit", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap(), vec!["period", "series", "k", "l"]);
    let periods: Vec<u64> = rdr.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
    assert!(periods.contains(&5) && periods.contains(&10));
    assert!(periods.iter().all(|&p| p <= 100));
}

#[test]
fn periods_check_gives_witnesses() {
    let v = json(&["periods", "--check", "30", "--emit", "json"]);
    assert_eq!(v["member"], true);
    assert!(!v["witnesses"].as_array().unwrap().is_empty());
    let v = json(&["periods", "--check", "3", "--emit", "json"]);
    assert_eq!(v["member"], false);
}

#[test]
fn orbit_of_o2() {
    let v = json(&["orbit", "--point", O2, "--map", "T", "--cap", "10"]);
    assert_eq!(v["halt"]["kind"], "period");
    assert_eq!(v["halt"]["step"], 5);
    assert_eq!(v["start"], O2);
    assert_eq!(v["steps"].as_array().unwrap().len(), 5);
    let v = json(&["orbit", "--point", "0;2;-2;2", "--map", "Tprime", "--cap", "10"]);
    assert_eq!(v["halt"]["step"], 1);
    assert_eq!(v["steps"][0]["z"], O2);
}

#[test]
fn orbit_csv() {
    let o = decagon(&["orbit", "--point", O2, "--cap", "10", "--emit", "csv"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,kind,z,sector,symbol");
    assert_eq!(lines.len(), 7);
    assert_eq!(*lines.last().unwrap(), "5,period,,,");
}

#[test]
fn usage_errors() {
    let bad_point = decagon(&["orbit", "--point", "1/2,3"]);
    assert_eq!(bad_point.status.code(), Some(2));
    let bad_flag = decagon(&["periods", "--frobnicate"]);
    assert_eq!(bad_flag.status.code(), Some(2));
    let bad_suite = decagon(&["verify", "--suite", "nope"]);
    assert_eq!(bad_suite.status.code(), Some(2));
}

#[test]
fn partition_level_two_svg() {
    let o = decagon(&["partition", "--level", "2", "--emit", "svg"]);
    assert!(o.status.success());
    let svg = stdout(&o);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"class="red""#).count(), 3);
    assert_eq!(svg.matches("fill=\"#c0392b\"").count(), 3);
    assert_eq!(svg.matches(r#"class="green""#).count(), 10);
}

#[test]
fn partition_json_is_exact() {
    let v = json(&["partition", "--level", "2"]);
    assert_eq!(v["red"], 3);
    assert_eq!(v["green"], 10);
    let area = v["red_area"].as_str().unwrap();
    assert_eq!(area.split(',').count(), 4);
}

#[test]
fn overlay_svg() {
    let svg = stdout(&decagon(&["overlay"]));
    assert_eq!(svg.matches(r#"class="table""#).count(), 1);
    for i in 1..=5 {
        assert_eq!(svg.matches(&format!(r#"class="alpha{i}""#)).count(), 1);
    }
    for i in 1..=4 {
        assert_eq!(svg.matches(&format!(r#"class="beta{i}""#)).count(), 1);
    }
}

#[test]
fn deterministic_output() {
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| decagon(&["measure", "--samples", "50", "--cap", "10000", "--seed", "7"]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    let svgs: Vec<Vec<u8>> = (0..2)
        .map(|_| decagon(&["partition", "--level", "3", "--emit", "svg"]).stdout)
        .collect();
    assert_eq!(svgs[0], svgs[1]);
}

#[test]
fn verify_reports_checks() {
    let o = decagon(&["verify", "--suite", "billiard-core", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"fixed.O1") && ids.contains(&"component.O4"));
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
}

#[test]
fn aperiodic_certificate() {
    let v = json(&["aperiodic", "--steps", "500", "--nesting", "3"]);
    assert_eq!(v["branches"], "aa");
    assert_eq!(v["report"]["failed"], 0);
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("decagon-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.csv");
    let o = decagon(&["periods", "--limit", "20", "--out", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("period,series,k,l"));
    std::fs::remove_dir_all(&dir).unwrap();
}
