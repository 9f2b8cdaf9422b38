//! Library surface of the command-line driver: configuration loading,
//! report types, and the execution glue, kept importable so integration
//! tests can parse reports with the same definitions the binary emits.

pub mod config;
pub mod driver;
pub mod report;
