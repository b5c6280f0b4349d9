//! Command-line front end: trace and table ingestion, command dispatch and
//! key-sorted JSON reports.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage or
//! input errors.

pub mod args;
pub mod commands;
pub mod report;
pub mod trace;

pub use commands::{execute, load_function, CliError};
pub use report::ReportDocument;
pub use trace::{TraceError, TraceFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Exit code for a finished report.
pub fn exit_code(report: &ReportDocument) -> i32 {
    match report.pass {
        Some(false) => EXIT_FAILED,
        _ => EXIT_OK,
    }
}
