//! Problem files, task orchestration, reports and the dense oracle behind the
//! `loghh` command.

pub mod oracle;
mod problem;
mod report;
mod run;

pub use problem::{
    express, parse_problem, BackendName, BaseBlock, Grading, HcRoute, MonoidBlock, ProblemFile, RingBlock, Task,
    TotalBlock,
};
pub use report::{sha256_hex, tables_json, Report, Status, TaskReport, SCHEMA_VERSION};
pub use run::{override_budget, run_problem};
