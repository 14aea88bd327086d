//! Command implementations for the `triwalk` driver: parameter sweeps,
//! structured CSV/JSON outputs with run manifests, and the acceptance
//! runner. All numeric tables are deterministic: fixed iteration orders,
//! index-merged parallel results, no time-dependent state in the data.

pub mod commands;
pub mod config;
pub mod output;

/// Process exit codes shared by the binary and the tests.
pub mod exit_codes {
    pub const OK: i32 = 0;
    pub const ACCEPTANCE_FAILURE: i32 = 1;
    pub const CONFIG_ERROR: i32 = 2;
    pub const IO_ERROR: i32 = 3;
    pub const FIT_FAILURE: i32 = 4;
}
