//! Document formats and the `qdc` command line tool.
//!
//! Every command reads JSON documents, delegates to `qdc-core` and writes a
//! document back. Exit code 0 means success or a positive answer, 1 a
//! well-formed negative answer, 2 invalid input.

pub mod app;
pub mod doc;
pub mod poset;

pub use app::{execute, Execution};
