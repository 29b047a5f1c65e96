#ifndef LOGHH_H
#define LOGHH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LoghhStatus {
  LOGHH_STATUS_OK = 0,
  LOGHH_STATUS_INPUT_ERROR = 1,
  LOGHH_STATUS_BUDGET = 2,
  LOGHH_STATUS_CHECK_FAILED = 3,
  LOGHH_STATUS_NULL_POINTER = 4,
  LOGHH_STATUS_INVALID_UTF8 = 5,
  LOGHH_STATUS_PANIC = 6,
} LoghhStatus;

/**
 * A parsed and validated problem file.
 */
typedef struct LoghhProblem LoghhProblem;

/**
 * The report of one run.
 */
typedef struct LoghhReport LoghhReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *loghh_version(void);

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next `loghh_*` call on the same thread.
 */
const char *loghh_last_error_message(void);

/**
 * Parses and validates the JSON problem in `text`. On success `*out` holds a
 * new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LoghhStatus loghh_problem_parse(const char *text, struct LoghhProblem **out);

/**
 * Number of tasks in a problem, or 0 for NULL.
 *
 * # Safety
 * `problem` must be NULL or a handle from [`loghh_problem_parse`].
 */
size_t loghh_problem_task_count(const struct LoghhProblem *problem);

/**
 * Runs every task. `*out` receives a report even when a task fails; the
 * return value is the worst task status.
 *
 * # Safety
 * `problem` must be a handle from [`loghh_problem_parse`] and `out` a valid
 * pointer.
 */
enum LoghhStatus loghh_problem_run(const struct LoghhProblem *problem, struct LoghhReport **out);

/**
 * # Safety
 * `problem` must be NULL or a handle from [`loghh_problem_parse`] that has
 * not been freed.
 */
void loghh_problem_free(struct LoghhProblem *problem);

/**
 * The report as pretty JSON. Release with [`loghh_string_free`].
 *
 * # Safety
 * `report` must be NULL or a handle from [`loghh_problem_run`].
 */
char *loghh_report_json(const struct LoghhReport *report);

/**
 * Process exit class of a report: 0 ok, 1 input, 2 budget, 3 check failed.
 * Returns -1 for NULL.
 *
 * # Safety
 * `report` must be NULL or a handle from [`loghh_problem_run`].
 */
int loghh_report_exit_class(const struct LoghhReport *report);

/**
 * # Safety
 * `report` must be NULL or a handle from [`loghh_problem_run`] that has not
 * been freed.
 */
void loghh_report_free(struct LoghhReport *report);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void loghh_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOGHH_H */
