//! Command-line front end: scenario files, CSV output and oracle checks.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod simulate;
pub mod verify;

pub use config::{parse_config, serialize_config, ConfigError, Family, Model, ScenarioConfig};
pub use simulate::{coefficients, run_dimer, simulate, DimerResults, RunOptions};
pub use verify::{render_table, run_checks, CheckResult, VerifyOptions};
