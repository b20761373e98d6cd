//! File formats, the command-line front end and the benchmark harness for
//! the `gccp-core` solvers.

pub mod bench;
pub mod cli;
pub mod instance;
pub mod partition;
pub mod report;
