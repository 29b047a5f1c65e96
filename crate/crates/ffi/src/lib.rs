//! C interface to `loghh`.
//!
//! Problems and reports are opaque handles owned by the caller and released
//! with the matching `_free` function. Every fallible call returns a
//! [`LoghhStatus`]; the message for the most recent failure on the calling
//! thread is available from [`loghh_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use loghh_core::cli::{parse_problem, run_problem, ProblemFile, Report, Status};
use loghh_core::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoghhStatus {
    Ok = 0,
    InputError = 1,
    Budget = 2,
    CheckFailed = 3,
    NullPointer = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

impl From<Status> for LoghhStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Ok => LoghhStatus::Ok,
            Status::InputError => LoghhStatus::InputError,
            Status::Budget => LoghhStatus::Budget,
            Status::Failed | Status::Unverified => LoghhStatus::CheckFailed,
        }
    }
}

/// A parsed and validated problem file.
pub struct LoghhProblem {
    text: String,
    #[allow(dead_code)]
    parsed: ProblemFile,
}

/// The report of one run.
pub struct LoghhReport {
    report: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn guard(f: impl FnOnce() -> LoghhStatus) -> LoghhStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            LoghhStatus::Panic
        }
    }
}

fn fail(e: &Error) -> LoghhStatus {
    set_error(e.to_string());
    Status::of_error(e).into()
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, LoghhStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(LoghhStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("input is not valid UTF-8");
        LoghhStatus::InvalidUtf8
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn loghh_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next `loghh_*` call on the same thread.
#[no_mangle]
pub extern "C" fn loghh_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses and validates the JSON problem in `text`. On success `*out` holds a
/// new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn loghh_problem_parse(text: *const c_char, out: *mut *mut LoghhProblem) -> LoghhStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return LoghhStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed = match parse_problem(text) {
            Ok(p) => p,
            Err(e) => return fail(&e),
        };
        let budget = parsed.budget();
        if let Err(e) = parsed.to_spec().and_then(|s| s.check(&budget)) {
            return fail(&e);
        }
        *out = Box::into_raw(Box::new(LoghhProblem {
            text: text.to_string(),
            parsed,
        }));
        LoghhStatus::Ok
    })
}

/// Number of tasks in a problem, or 0 for NULL.
///
/// # Safety
/// `problem` must be NULL or a handle from [`loghh_problem_parse`].
#[no_mangle]
pub unsafe extern "C" fn loghh_problem_task_count(problem: *const LoghhProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.parsed.tasks.len())
}

/// Runs every task. `*out` receives a report even when a task fails; the
/// return value is the worst task status.
///
/// # Safety
/// `problem` must be a handle from [`loghh_problem_parse`] and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn loghh_problem_run(problem: *const LoghhProblem, out: *mut *mut LoghhReport) -> LoghhStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer");
            return LoghhStatus::NullPointer;
        }
        *out = ptr::null_mut();
        let Some(p) = problem.as_ref() else {
            set_error("null problem handle");
            return LoghhStatus::NullPointer;
        };
        let report = run_problem(&p.text, None);
        let status = report.status;
        if status != Status::Ok {
            let msg = report
                .tasks
                .iter()
                .find(|t| t.status == status)
                .and_then(|t| t.message.clone())
                .or_else(|| report.message.clone())
                .unwrap_or_else(|| format!("{status:?}"));
            set_error(msg);
        }
        *out = Box::into_raw(Box::new(LoghhReport { report }));
        status.into()
    })
}

/// # Safety
/// `problem` must be NULL or a handle from [`loghh_problem_parse`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn loghh_problem_free(problem: *mut LoghhProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// The report as pretty JSON. Release with [`loghh_string_free`].
///
/// # Safety
/// `report` must be NULL or a handle from [`loghh_problem_run`].
#[no_mangle]
pub unsafe extern "C" fn loghh_report_json(report: *const LoghhReport) -> *mut c_char {
    match report.as_ref() {
        Some(r) => CString::new(r.report.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => {
            set_error("null report handle");
            ptr::null_mut()
        }
    }
}

/// Process exit class of a report: 0 ok, 1 input, 2 budget, 3 check failed.
/// Returns -1 for NULL.
///
/// # Safety
/// `report` must be NULL or a handle from [`loghh_problem_run`].
#[no_mangle]
pub unsafe extern "C" fn loghh_report_exit_class(report: *const LoghhReport) -> c_int {
    report.as_ref().map_or(-1, |r| r.report.exit_code())
}

/// # Safety
/// `report` must be NULL or a handle from [`loghh_problem_run`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn loghh_report_free(report: *mut LoghhReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn loghh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
