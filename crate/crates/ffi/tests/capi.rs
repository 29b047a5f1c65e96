use std::ffi::{CStr, CString};
use std::ptr;

use loghh::*;

const KUMMER: &str = r#"{
  "field": "GF(2)",
  "base": { "monoid": { "free": 1 }, "chart": ["0"] },
  "total": { "monoid": { "free": 1 }, "theta": [[2]], "chart": ["0"] },
  "tasks": [ { "task": "hh", "n": 3, "backend": "bar" } ]
}"#;

fn last_error() -> Option<String> {
    let p = loghh_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn parse(text: &str) -> (LoghhStatus, *mut LoghhProblem) {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    let s = unsafe { loghh_problem_parse(c.as_ptr(), &mut out) };
    (s, out)
}

#[test]
fn parse_run_report() {
    let (s, p) = parse(KUMMER);
    assert_eq!(s, LoghhStatus::Ok);
    assert!(last_error().is_none());
    assert_eq!(unsafe { loghh_problem_task_count(p) }, 1);
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { loghh_problem_run(p, &mut r) }, LoghhStatus::Ok);
    assert_eq!(unsafe { loghh_report_exit_class(r) }, 0);
    let json = unsafe { loghh_report_json(r) };
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let totals: Vec<u64> = v["tasks"][0]["result"]["tables"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["total"].as_u64().unwrap())
        .collect();
    assert_eq!(totals, vec![1, 1, 1, 1]);
    unsafe {
        loghh_string_free(json);
        loghh_report_free(r);
        loghh_problem_free(p);
    }
}

#[test]
fn input_errors_set_the_message() {
    let (s, p) = parse("{\"field\": ");
    assert_eq!(s, LoghhStatus::InputError);
    assert!(p.is_null());
    assert!(last_error().unwrap().contains("parse error"));

    let (s, _) = parse(&KUMMER.replace("[[2]]", "[[-2]]"));
    assert_eq!(s, LoghhStatus::InputError);
    assert!(last_error().unwrap().contains("base generator 1"));
}

#[test]
fn budget_status_is_returned() {
    let node = r#"{
      "field": "QQ",
      "base": { "monoid": { "free": 1 }, "chart": ["0"] },
      "total": { "monoid": { "free": 2 }, "theta": [[1, 1]],
                 "ring": { "variables": ["x", "y"], "relations": ["x*y"] }, "chart": ["x", "y"] },
      "grading": { "weights": { "x": 1, "y": 1 } },
      "budget": { "max_pairs": 1 },
      "tasks": [ { "task": "hh", "n": 2 } ]
    }"#;
    let (s, p) = parse(node);
    assert_eq!(s, LoghhStatus::Ok, "{:?}", last_error());
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { loghh_problem_run(p, &mut r) }, LoghhStatus::Budget);
    assert!(!r.is_null());
    assert_eq!(unsafe { loghh_report_exit_class(r) }, 2);
    assert!(last_error().unwrap().contains("budget"));
    unsafe {
        loghh_report_free(r);
        loghh_problem_free(p);
    }
}

#[test]
fn null_and_bad_utf8_are_rejected() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { loghh_problem_parse(ptr::null(), &mut out) }, LoghhStatus::NullPointer);
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(
        unsafe { loghh_problem_parse(bad.as_ptr().cast(), &mut out) },
        LoghhStatus::InvalidUtf8
    );
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { loghh_problem_run(ptr::null(), &mut r) }, LoghhStatus::NullPointer);
    assert_eq!(unsafe { loghh_report_exit_class(ptr::null()) }, -1);
    assert!(unsafe { loghh_report_json(ptr::null()) }.is_null());
    unsafe {
        loghh_problem_free(ptr::null_mut());
        loghh_report_free(ptr::null_mut());
        loghh_string_free(ptr::null_mut());
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(loghh_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/loghh.h");
    let Ok(out) = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header])
        .output()
    else {
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}
