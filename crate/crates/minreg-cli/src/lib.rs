//! Library surface of the `minreg` binary: configuration schema and command
//! implementations, exposed for integration testing.

pub mod commands;
pub mod config;
