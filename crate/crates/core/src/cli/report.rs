//! The JSON report written by `loghh run`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Unverified,
    Budget,
    Failed,
    InputError,
}

impl Status {
    /// Process exit code: 0 success, 1 bad input, 2 budget, 3 a check failed
    /// or a result could not be verified.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::InputError => 1,
            Status::Budget => 2,
            Status::Failed | Status::Unverified => 3,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Parse { .. } | Error::Schema(_) | Error::InvalidSpec(_) => Status::InputError,
            Error::BudgetExceeded(_) => Status::Budget,
            _ => Status::Failed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub task: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub result: Value,
    /// Named internal checks and whether they held.
    #[serde(default)]
    pub checks: BTreeMap<String, bool>,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub input_sha256: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub tasks: Vec<TaskReport>,
}

pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(input: &str) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            tool: format!("loghh {}", env!("CARGO_PKG_VERSION")),
            input_sha256: sha256_hex(input),
            status: Status::Ok,
            message: None,
            tasks: Vec::new(),
        }
    }

    pub fn input_error(input: &str, e: &Error) -> Self {
        let mut r = Report::new(input);
        r.status = Status::of_error(e);
        r.message = Some(e.to_string());
        r
    }

    /// The worst task status, or the report's own status if no task ran.
    pub fn push(&mut self, t: TaskReport) {
        self.status = self.status.max(t.status);
        self.tasks.push(t);
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `{"n": n, "total": Σ, "degrees": [[d, dim], ...]}` for each table.
pub fn tables_json(tables: &[BTreeMap<i64, usize>]) -> Value {
    Value::Array(
        tables
            .iter()
            .enumerate()
            .map(|(n, t)| {
                serde_json::json!({
                    "n": n,
                    "total": t.values().sum::<usize>(),
                    "degrees": t.iter().map(|(d, v)| [*d, *v as i64]).collect::<Vec<_>>(),
                })
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn worst_status_wins() {
        let mut r = Report::new("{}");
        let t = |s| TaskReport {
            task: "hh".into(),
            status: s,
            message: None,
            result: Value::Null,
            checks: BTreeMap::new(),
            seconds: 0.0,
        };
        r.push(t(Status::Ok));
        r.push(t(Status::Budget));
        r.push(t(Status::Ok));
        assert_eq!(r.exit_code(), 2);
    }
}
