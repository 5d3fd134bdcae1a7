//! Command-line driver, file formats and reports for `frameforge-core`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod pipeline;
pub mod report;

pub use error::{CliError, Result};
