use std::process::Command;

use loghh_core::cli::{parse_problem, run_problem, Report, Status, Task};
use loghh_core::Error;
use proptest::prelude::*;
use serde_json::Value;

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn totals(report: &Report, task: usize) -> Vec<u64> {
    report.tasks[task].result["tables"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["total"].as_u64().unwrap())
        .collect()
}

#[test]
fn logpoint_fixture() {
    let r = run_problem(&fixture("logpoint.json"), None);
    assert_eq!(r.status, Status::Ok, "{}", r.to_json());
    assert_eq!(totals(&r, 0), vec![1, 1, 0, 0]);
    assert_eq!(totals(&r, 1), vec![1, 1, 0, 0]);
    assert_eq!(r.tasks[2].result["isomorphism"], Value::Bool(true));
    assert_eq!(totals(&r, 3), vec![1; 6]);
}

#[test]
fn node_fixture() {
    let r = run_problem(&fixture("node.json"), None);
    assert_eq!(r.status, Status::Ok);
    let tor1 = &r.tasks[0].result["tables"][1]["degrees"];
    assert_eq!(tor1, &serde_json::json!([[0, 1], [1, 2], [2, 2], [3, 2], [4, 2]]));
    assert_eq!(&r.tasks[1].result["hilbert"], tor1);
    assert_eq!(totals(&r, 0)[2..], [0, 0]);
    assert_eq!(r.tasks[2].result["isomorphism"], Value::Bool(true));
}

#[test]
fn kummer_f2_fixture() {
    let r = run_problem(&fixture("kummer2_f2.json"), None);
    assert_eq!(r.status, Status::Ok);
    assert_eq!(totals(&r, 0), vec![1; 5]);
    assert_eq!(r.tasks[2].checks["exact"], true);
}

#[test]
fn parse_error_points_at_second_caret() {
    let text = "{\n  \"field\": \"QQ\",\n  \"total\": {\n    \"monoid\": {\"free\": 0},\n    \"ring\": {\"variables\": [\"x\"], \"relations\": [\"x^^2\"]}\n  },\n  \"tasks\": []\n}\n";
    match parse_problem(text) {
        Err(Error::Parse { line, column, .. }) => {
            let l = text.lines().nth(line - 1).unwrap();
            assert_eq!(line, 5);
            assert_eq!(&l[column - 1..column], "^");
            assert_eq!(&l[column - 2..column], "^^");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_keys_are_rejected() {
    let text = fixture("logpoint.json").replacen("\"field\"", "\"colour\": 1, \"field\"", 1);
    assert!(matches!(parse_problem(&text), Err(Error::Schema(_))));
    let r = run_problem(&text, None);
    assert_eq!(r.exit_code(), 1);
}

#[test]
fn theta_outside_p_names_the_generator() {
    let text = fixture("node_refined.json").replace("\"theta\": [[1, 1]]", "\"theta\": [[-1, 1]]");
    let p = parse_problem(&text).unwrap();
    match p.to_spec() {
        Err(Error::Schema(m)) => assert!(m.contains("base generator 1"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn refined_chart_finds_the_diagonal_generator() {
    let p = parse_problem(&fixture("node_refined.json")).unwrap();
    let s = p.to_spec().unwrap();
    assert_eq!(s.theta.images, vec![vec![0, 0, 1]]);
}

#[test]
fn budget_exhaustion_is_reported() {
    let text = fixture("node.json").replacen("\"tasks\"", "\"budget\": {\"max_pairs\": 1}, \"tasks\"", 1);
    let r = run_problem(&text, None);
    assert_eq!(r.status, Status::Budget, "{}", r.to_json());
    assert_eq!(r.exit_code(), 2);
}

#[test]
fn reruns_agree_apart_from_timings() {
    let strip = |mut r: Report| {
        for t in &mut r.tasks {
            t.seconds = 0.0;
        }
        r.to_json()
    };
    let text = fixture("dual_numbers.json");
    assert_eq!(strip(run_problem(&text, None)), strip(run_problem(&text, None)));
}

#[test]
fn fixtures_round_trip() {
    for name in ["logpoint.json", "node.json", "node_refined.json", "kummer2_f2.json", "dual_numbers.json", "two_points.json"] {
        let p = parse_problem(&fixture(name)).unwrap();
        let again = parse_problem(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, again, "{name}");
    }
}

#[test]
fn binary_exit_codes() {
    let dir = std::env::temp_dir().join(format!("loghh-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bin = env!("CARGO_BIN_EXE_loghh");
    let good = format!("{}/fixtures/kummer2_f2.json", env!("CARGO_MANIFEST_DIR"));
    let out = dir.join("report.json");
    let st = Command::new(bin)
        .args(["run", &good, "--threads", "2", "--oracle", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(st.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["tasks"].as_array().unwrap().last().unwrap()["task"], "oracle");

    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"field\": \"QQ\",").unwrap();
    let st = Command::new(bin).arg("run").arg(&bad).output().unwrap();
    assert_eq!(st.status.code(), Some(1));

    let st = Command::new(bin)
        .args(["run", &good, "--budget", "max_pairs=1"])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "bar backend needs no S-pairs");
    std::fs::remove_dir_all(&dir).ok();
}

fn small_problem() -> impl Strategy<Value = String> {
    (
        prop::sample::select(vec!["QQ", "GF(2)", "GF(3)"]),
        1usize..4,
        0usize..3,
        prop::collection::vec(0i64..3, 2),
    )
        .prop_map(|(field, n, m, w)| {
            format!(
                r#"{{"field": "{field}", "total": {{"monoid": {{"free": 0}}, "ring": {{"variables": ["x", "y"], "relations": ["x^2", "y^{}"]}}}},
                "grading": {{"weights": {{"x": {}, "y": {}}}}},
                "tasks": [{{"task": "hh", "n": {n}, "backend": "bar"}}, {{"task": "sbi", "m_max": {m}}}]}}"#,
                m + 2,
                w[0],
                w[1]
            )
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn serialized_problems_reparse(text in small_problem()) {
        let p = parse_problem(&text).unwrap();
        let q = parse_problem(&serde_json::to_string_pretty(&p).unwrap()).unwrap();
        prop_assert_eq!(&p, &q);
        let is_hh = matches!(p.tasks[0], Task::Hh { .. });
        prop_assert!(is_hh);
    }
}
