use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn splitred(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_splitred")).args(args).output().expect("spawn splitred")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn report(args: &[&str]) -> Value {
    let out = splitred(args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn csv_rows(out: &Output) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    r.records().map(|x| x.expect("csv row")).collect()
}

#[test]
fn counterexample_scenario_is_totally_not_split() {
    let r = report(&["run", &fixture("cubic_d3.json")]);
    assert_eq!(r["status"], "TotallyNotSplit");
    assert_eq!(r["report"]["n"], "2");
    assert_eq!(r["report"]["lifting_exponent"], "0");
    assert_eq!(r["report"]["verdicts"][0]["certificate"]["tag"], "ValuationScreen");
}

#[test]
fn zeta3_pair() {
    assert_eq!(report(&["run", &fixture("zeta3_split.json")])["status"], "Split");
    let r = report(&["run", &fixture("zeta3_isogenous.json")]);
    assert_eq!(r["status"], "TotallyNotSplit");
    assert_eq!(r["report"]["verdicts"][0]["certificate"]["tag"], "ValuationScreen");
}

#[test]
fn every_number_in_a_report_is_a_string() {
    fn walk(v: &Value) {
        match v {
            Value::Number(n) => panic!("bare number {n}"),
            Value::Array(a) => a.iter().for_each(walk),
            Value::Object(o) => o.values().for_each(walk),
            _ => {}
        }
    }
    for f in ["cubic_d3.json", "kummer_conductor.json", "type_iv.json", "type_i0star.json", "tame_type_iii.json"] {
        walk(&report(&["run", &fixture(f)]));
    }
}

#[test]
fn curve_and_conductor_scenarios() {
    let r = report(&["run", &fixture("type_iv.json")]);
    assert_eq!(r["report"]["v_b8"], "4");
    assert_eq!(r["report"]["z_valuation_3p"], "1");
    assert_eq!(r["report"]["status_e"], "Split");
    assert_eq!(r["report"]["status_res"], "TotallyNotSplit");
    let r = report(&["run", &fixture("type_i0star.json")]);
    assert_eq!(r["report"]["m"], serde_json::json!(["1", "1", "1"]));
    assert_eq!(r["status"], "Split");
    let r = report(&["run", &fixture("kummer_conductor.json")]);
    assert_eq!(r["report"]["v_different"], "5");
    assert_eq!(r["report"]["delta_restriction"], "6");
    assert_eq!(r["report"]["bk_bound"], "6");
}

#[test]
fn tame_base_scenario_lists_certificates() {
    let r = report(&["run", &fixture("tame_type_iii.json")]);
    let names: Vec<&str> = r["report"]["certificates"]
        .as_array()
        .expect("certificates")
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"tame_base_change"), "{names:?}");
    assert!(names.contains(&"elliptic_base_change"), "{names:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&splitred(&["run", &fixture("malformed_q.json")])), 2);
    assert_eq!(code(&splitred(&["run", &fixture("no_such_file.json")])), 2);
    assert_eq!(code(&splitred(&["frobnicate"])), 2);
    assert_eq!(code(&splitred(&["run", &fixture("unit_q.json")])), 1);
    assert_eq!(code(&splitred(&["run", &fixture("starved_budget.json")])), 0);
    let strict = splitred(&["--strict", "run", &fixture("starved_budget.json")]);
    assert_eq!(code(&strict), 3);
    let r: Value = serde_json::from_slice(&strict.stdout).expect("report still printed");
    assert_eq!(r["status"], "Inconclusive");
    assert_eq!(code(&splitred(&["--strict", "run", &fixture("cubic_d3.json")])), 0);
    assert_eq!(code(&splitred(&["--help"])), 0);
}

#[test]
fn unknown_fields_are_schema_errors() {
    let dir = std::env::temp_dir().join(format!("splitred-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("extra.json");
    let text = std::fs::read_to_string(fixture("cubic_d3.json")).unwrap().replace("\"id\"", "\"colour\": \"red\", \"id\"");
    std::fs::write(&path, text).unwrap();
    let out = splitred(&["run", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_over_d_gives_one_row_per_value() {
    let out = splitred(&["scan", &fixture("binomial_template.json"), "--vary", "d=2..6"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    for (row, d) in rows.iter().zip(2..) {
        assert_eq!(&row[0], format!("binomial[d={d}]"));
        assert_eq!(&row[2], d.to_string());
        assert_eq!(&row[6], "TotallyNotSplit");
    }
}

#[test]
fn scan_reproduces_the_lifting_exponent() {
    let out = splitred(&["scan", &fixture("lifting_template.json"), "--vary", "m=0,1"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[0][5], "0");
    assert_eq!(&rows[1][5], "1");
}

#[test]
fn scan_with_an_empty_range_writes_only_the_header() {
    let out = splitred(&["scan", &fixture("binomial_template.json"), "--vary", "d=5..4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("scenario_id,p,d,n,v_p_n,lifting_exponent,status,delta_swan,bk_bound,certificate,runtime_ms"));
}

#[test]
fn scan_output_does_not_depend_on_thread_count() {
    let args = |jobs: &'static str| {
        splitred(&["scan", &fixture("binomial_template.json"), "--vary", "d=2..9", "--jobs", jobs]).stdout
    };
    let one = args("1");
    assert_eq!(one, args("8"));
    assert_eq!(one, args("3"));
}

#[test]
fn scan_errors_stop_or_are_recorded() {
    // d = 0 is not a valid level polynomial
    let stop = splitred(&["scan", &fixture("binomial_template.json"), "--vary", "d=0..3"]);
    assert_ne!(code(&stop), 0);
    let kept = splitred(&["scan", &fixture("binomial_template.json"), "--vary", "d=0..3", "--keep-going"]);
    assert_eq!(code(&kept), 1);
    let rows = csv_rows(&kept);
    assert_eq!(rows.len(), 4);
    assert_eq!(&rows[0][6], "Error");
    assert_eq!(&rows[3][6], "TotallyNotSplit");
}

#[test]
fn scan_rejects_unused_keys() {
    let out = splitred(&["scan", &fixture("binomial_template.json"), "--vary", "x=1..2"]);
    assert_eq!(code(&out), 2);
    let out = splitred(&["scan", &fixture("binomial_template.json"), "--vary", "d=1..x"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn reproduce_paper_passes_every_row() {
    let out = splitred(&["reproduce-paper"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains("FAIL"), "{text}");
    let summary = text.lines().last().unwrap();
    let (passed, total) = summary.split_once(" passed").unwrap().0.split_once('/').unwrap();
    assert_eq!(passed, total);
}

#[test]
fn reproduce_paper_filters_cases() {
    let list = String::from_utf8(splitred(&["reproduce-paper", "--list"]).stdout).unwrap();
    assert!(list.lines().any(|l| l.starts_with("zeta3-pair")));
    let out = splitred(&["reproduce-paper", "--case", "ogg"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().all(|l| !l.contains("zeta3")));
    assert_eq!(code(&splitred(&["reproduce-paper", "--case", "nonexistent"])), 2);
}
