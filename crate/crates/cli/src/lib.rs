//! Building blocks of the `cvwerner` command-line tool.

pub mod config;
pub mod figures;
pub mod format;
pub mod sweep;
